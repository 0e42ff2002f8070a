# graphsift tests
