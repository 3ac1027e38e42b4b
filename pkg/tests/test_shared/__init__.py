# Tests for shared utilities
