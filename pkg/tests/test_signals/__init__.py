# Tests for src/signals
