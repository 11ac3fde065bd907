"""Grant-free random access with superpositioned preambles over massive MIMO."""

from ._kernels import BACKEND
from .analytics import (binomial_avg_error, collision_free_prob, db_to_linear, qfunction,
                        theta, zc_success_prob)
from .channel import ChannelConfig, Scenario, draw_scenario, make_rng
from .detection import DetectionReport, correlate, detect_all, equal_error_threshold
from .estimation import EstimateSet, average_rank_curve, estimate_channels
from .link import DeviceOutcome, evaluate_trial, sinr_conjugate
from .pool import (PreamblePool, SIndexFamily, UnsupportedOrderError, build_pool,
                   build_transfer_matrix, enumerate_ssets, spreamble_waveform)

__version__ = "0.1.0"
