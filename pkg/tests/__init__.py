# Tests for sub-center speaker embedding experiments
