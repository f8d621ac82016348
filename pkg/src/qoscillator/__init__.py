"""Numerical realizations of the gl_q(n)-covariant oscillator algebra and
its q-Virasoro algebra at roots of unity, with relation conformance checks."""

__version__ = "0.1.0"

from .qcalc import (  # noqa: E402
    Mode, QParameter, half_power, jackson_integral, q_exponential, q_factorial, q_from_root,
    q_number, q_real,
)
from .opcore import (  # noqa: E402
    Basis, Operator, Relation, RepAssignment, ResidualRecord, check_relation, check_suite,
    evaluate_word, relation_suite_oscillator,
)
from .fockrep import FockIndex, build_fock_rep, build_state  # noqa: E402
from .bargmann import build_bargmann_rep, inner_product  # noqa: E402
from .cyclic import ExponentMode, build_cyclic_rep, build_shift_ops  # noqa: E402
from .virasoro import build_L, build_l, check_virasoro, classical_limit_probe  # noqa: E402
