# Tests for src/experiments
