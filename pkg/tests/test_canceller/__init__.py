# Tests for src/canceller
