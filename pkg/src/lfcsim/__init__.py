"""Multi-area load frequency control under load-altering attacks:
time-domain simulation, grid-code compliance metrics and eigenvalue-based
stability analysis with countermeasure sweeps."""

from .control import ControllerState, PidGains, controller_step
from .dataset import Dataset, load_dataset, save_dataset, shipped_dataset_path
from .errors import ConvergenceError, DatasetError
from .gridcode import (SAUDI_TABLE, ThresholdRow, ThresholdTable, classify,
                       load_threshold_table, metrics)
from .model import (AreaMatrices, AreaParams, GeneratorParams, ace,
                    build_area_matrices, compute_beta, tie_coefficient)
from .network import (NetworkModel, ReducedNetwork, ac_injection,
                      attack_matrix, build_descriptor, build_network_model,
                      kron_reduce, row_sum_diag, simulate_network)
from .numerics import Spectrum, eigenvalues, expm, zoh_discretize
from .scenarios import SCENARIO_IDS, build_scenario, network_attack_gains
from .sim import (AttackScenario, SystemModel, Trace, build_system,
                  coupling_input, simulate)
from .stability import (LocusPoint, SweepReport, countermeasure_search,
                        stability_verdict, sweep_parameter)

__version__ = "0.1.0"
