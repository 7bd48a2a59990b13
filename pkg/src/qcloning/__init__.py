"""Three-qubit cloning machines and the coherence/entanglement of their outputs."""
from .cloners import (
    BHMachineParams,
    ClonerSpec,
    CloneOutput,
    Machine,
    StateDepParams,
    apply_cloner,
    build_isometry,
    copy_quality,
    make_machine_vectors,
    verify_unitarity,
)
from .core import DensityMatrix, InputQubit, PureState, partial_trace, tensor_product
from .errors import InvariantError, ParameterError
from .measures import XFormState, check_bound, concurrence, hs_distance, l1_coherence

__version__ = "0.1.0"
