from fractions import Fraction


class Config:
    # Precision settings
    GUARD_DIGITS = 10  # extra decimals carried by every high-precision step
    DEFAULT_DIGITS = 10
    RATIO_DIGITS = 6  # empirical error ratios and digit rates
    SIGMA_DIGITS = 12  # irrational convergence factors
    RATE_DIGITS = 4  # digits-per-iterations as printed in reports

    # Evaluation settings
    DEFAULT_MAX_DEPTH = 10_000
    GAUSS_MAX_DEPTH = 100_000  # boundary kernels converge slowly
    VERIFY_RANGE = 10_000  # zero/pole checks on coefficient sequences
    DEFAULT_TABLE_ROWS = (5, 10, 15)
    DEFAULT_ANALYSIS_DEPTH = 50
    GAUSS_PRINT_LIMIT = 20  # d_n values shown by the gauss command
    POINTWISE_CACHE_SIZE = 65_536  # memoized values per rule without a closed form

    # Output settings
    ERROR_SIGNIFICANT_DIGITS = 3
    OUTPUT_FORMATS = ("text", "json", "csv", "markdown")

    # Logging
    LOG_LEVEL = "WARNING"
    LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    LOG_FILE = None  # set to a path to mirror logs into a file
    SHOW_PROGRESS = False

    @staticmethod
    def working_precision(digits: int, max_depth: int = 1) -> int:
        """Decimal context precision for a recurrence of up to max_depth steps"""
        return digits + 2 * Config.GUARD_DIGITS + len(str(max_depth))


# Values published alongside the conjecture, kept for side-by-side reports.
# The verify command checks against them; reports flag where computation disagrees.
PUBLISHED_VALUES = {
    "table": {  # absolute errors of the n-th convergent
        5: "9.56e-5",
        10: "4.37e-8",
        15: "2.01e-11",
    },
    "rho_expansion": (Fraction(-2, 9), Fraction(7, 27), Fraction(31, 81)),
    "tilde_expansion": (Fraction(-9, 4), Fraction(21, 4), Fraction(-49, 16)),
    "limit": Fraction(-2, 9),
    "sigma": Fraction(1, 2),
    "digits_per_10": "3.01",
}
