# Tests for src/pilot
