# Tests for ipdsaw
