# Test package for the D-SIC simulator
