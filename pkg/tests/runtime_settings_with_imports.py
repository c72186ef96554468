INCLUDE_SETTINGS = ["python:tests.runtime_settings"]

# Test only upper values are included
TEST_VALUE = "bar"
