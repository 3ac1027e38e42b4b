# Tests for src/basis
