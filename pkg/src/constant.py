# Constants file
from enum import Enum


class Defaults(Enum):
    """
    Hyperparameter defaults shared by the library and the command line
    """
    # Relabeling
    H = 2
    K_SELECT = 5000

    # SVM / MKL
    C = 1.0
    P = 2.0
    TOL = 1.0e-3
    MAX_PASSES_PER_SAMPLE = 10
    OUTER_TOL = 1.0e-4
    MAX_OUTER_ITERS = 50

    # Localization
    TOP_K = 10
    UNTAGGED_GROUP = "(untagged)"

    # Contexts
    BENIGN_CONTEXT = "user-aware"
    MALICE_CONTEXT = "user-unaware"
    NEUTRAL_CONTEXT = "*"


class Separator(Enum):
    """
    Reserved characters of the contextual label encoding
    """
    CONCAT = "⊕"
    MULTISET = ","
    OPEN = "("
    CLOSE = ")"
    ESCAPE = "\\"
    HEIGHT = ":"


class FileFormat(Enum):
    """
    Format tags written into serialized artifacts
    """
    MODEL = "viewkernel-model/1"
    REPORT = "viewkernel-mscores/1"
    MANIFEST = "viewkernel-manifest/1"


class Tolerance(Enum):
    """
    Numerical tolerances of identity checks
    """
    SYMMETRY = 1.0e-9
    PARTITION = 1.0e-6
