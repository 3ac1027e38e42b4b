# Tests for src/frontend
