"""graphsift: exact graph similarity search under edit distance."""
