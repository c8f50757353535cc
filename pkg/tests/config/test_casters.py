"""Tests for the raw-value converters."""

import pytest

from scatterchain.config import Choices, split_assignment


class TestChoices:
    def test_valid_choice_is_normalized(self):
        assert Choices(["debug", "info"], cast=str.lower)("INFO") == "info"

    def test_invalid_choice(self):
        with pytest.raises(ValueError, match="Must be one of: debug, info"):
            Choices(["debug", "info"])("trace")

    def test_non_string_choices(self):
        assert Choices((16, 32), cast=int)("32") == 32


class TestSplitAssignment:
    def test_pair(self):
        assert split_assignment(" tangent = 1e-8 ") == ("tangent", "1e-8")

    def test_value_may_contain_equals(self):
        assert split_assignment("name=a=b") == ("name", "a=b")

    @pytest.mark.parametrize("text", ["tangent", "tangent=", "=1e-8", " = "])
    def test_incomplete(self, text):
        with pytest.raises(ValueError, match="NAME=VALUE"):
            split_assignment(text)
