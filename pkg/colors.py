import re

ANSI_ESCAPE = re.compile(r"\033\[[0-9;]*m")


# ANSI color codes
class Colors:
    BRIGHT_BLUE = '\033[94m'
    BRIGHT_CYAN = '\033[96m'
    BRIGHT_GREEN = '\033[92m'
    BRIGHT_RED = '\033[91m'
    BRIGHT_YELLOW = '\033[93m'
    BRIGHT_MAGENTA = '\033[95m'

    BOLD = '\033[1m'
    DIM = '\033[2m'
    GREY = '\033[37m'

    END = '\033[0m'

    @staticmethod
    def strip(text: str) -> str:
        """Remove color codes, for log files and non-terminal streams."""
        return ANSI_ESCAPE.sub("", text)


def degree_color(degree) -> str:
    """Highlight for a stratum dimension: red when empty, green otherwise."""
    return Colors.BRIGHT_RED if degree == float("-inf") else Colors.BRIGHT_GREEN
