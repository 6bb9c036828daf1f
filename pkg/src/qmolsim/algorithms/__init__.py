"""Black-box quantum algorithms, one runner per method."""

from .common import AlgorithmError, AnsatzState, PauliEvalCounter, ResourceReport
from .pqe import PqeResult, SpqeResult, run_pqe, run_spqe
from .qite import QiteResult, SubspaceResult, run_qite, run_qlanczos
from .qk import run_mrsqk, run_qk, spin_complete
from .qpe import QpeResult, qft_circuit, run_qpe, run_qpe_system
from .vqe import VqeResult, pool_gradients, run_adapt_vqe, run_vqe

__all__ = [
    "AlgorithmError",
    "AnsatzState",
    "PauliEvalCounter",
    "PqeResult",
    "QiteResult",
    "QpeResult",
    "ResourceReport",
    "SpqeResult",
    "SubspaceResult",
    "VqeResult",
    "pool_gradients",
    "qft_circuit",
    "run_adapt_vqe",
    "run_mrsqk",
    "run_pqe",
    "run_qite",
    "run_qk",
    "run_qlanczos",
    "run_qpe",
    "run_qpe_system",
    "run_spqe",
    "run_vqe",
    "spin_complete",
]
