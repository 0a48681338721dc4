"""Validation of run settings coming from the sidebar or the command line."""

from config.constants import (
    MAX_CUBE_DIM,
    MAX_LEVEL_BOUND,
    N_BOUND,
    STEP_BUDGET,
    VARIANTS,
)

# counterexample and refutation runs above these stop being desk-sized
MAX_TRACKER_SIZE = 5
MAX_BUDGET = 100 * STEP_BUDGET
MAX_N_BOUND = 8 * N_BOUND


class InputValidator:
    """Each check returns (ok, message); message is empty when ok."""

    @staticmethod
    def validate_level(level: int) -> tuple[bool, str]:
        if level < 1:
            return False, "Level bound must be at least 1"
        if level > MAX_LEVEL_BOUND:
            return False, f"Level bound is capped at {MAX_LEVEL_BOUND}"
        return True, ""

    @staticmethod
    def validate_dimension(m: int) -> tuple[bool, str]:
        if m < 0 or m > MAX_CUBE_DIM:
            return False, f"Cube dimensions run from 0 to {MAX_CUBE_DIM}"
        return True, ""

    @staticmethod
    def validate_variant(variant: str) -> tuple[bool, str]:
        if variant not in VARIANTS:
            return False, f"Variant must be one of {', '.join(VARIANTS)}"
        return True, ""

    @staticmethod
    def validate_tracker_size(size: int) -> tuple[bool, str]:
        # 0 is allowed: it switches the section search off
        if size < 0:
            return False, "Tracker size bound cannot be negative"
        if size > MAX_TRACKER_SIZE:
            return False, f"Tracker size bound is capped at {MAX_TRACKER_SIZE}"
        return True, ""

    @staticmethod
    def validate_budget(budget: int) -> tuple[bool, str]:
        if budget < 1:
            return False, "Step budget must be at least 1"
        if budget > MAX_BUDGET:
            return False, f"Step budget is capped at {MAX_BUDGET}"
        return True, ""

    @staticmethod
    def validate_n_bound(n_bound: int) -> tuple[bool, str]:
        if n_bound < 2:
            return False, "The refutation window needs at least n = 2"
        if n_bound > MAX_N_BOUND:
            return False, f"The refutation window is capped at {MAX_N_BOUND}"
        return True, ""

    @classmethod
    def validate_all(cls, level: int, variant: str, tracker_size: int, budget: int,
                     n_bound: int) -> list[str]:
        results = [
            cls.validate_level(level),
            cls.validate_variant(variant),
            cls.validate_tracker_size(tracker_size),
            cls.validate_budget(budget),
            cls.validate_n_bound(n_bound),
        ]
        return [message for ok, message in results if not ok]
