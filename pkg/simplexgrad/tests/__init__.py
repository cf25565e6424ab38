# simplexgrad tests
