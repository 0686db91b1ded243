"""Simulation and gait synthesis for a planar two-link magnetic swimmer."""

from .model import (SwimmerParams, State, magnetization_world,
                    magnetic_torque, assemble_dynamics, mobility)
from .signals import (ConstPlusSine, Rotating, Schedule, Sampled,
                      ControlSignal, evaluate_signal, signal_to_json,
                      signal_from_json)
from .sim import Trajectory, rollout, rollout_batch, per_cycle_summary
from .geom import (PhasedSine, RotatedEllipse, SampledLoop, ShapeLoop,
                   CurvatureField, decompose, local_jacobian,
                   curvature_field, loop_displacement_line,
                   loop_displacement_surface, loop_to_control,
                   regularize_control, loop_to_json, loop_from_json)
from .stability import (StrobeResult, BasinResult, strobe_map,
                        find_limit_cycle, basin_sample, angular_distance)
from .design import (MagnetizationSurface, optimize_magnetization,
                     turning_time, turning_time_analytic, turning_time_sweep,
                     rotational_drag)
from .primitives import (translate_signal, rectangle_schedule,
                         turn_in_place_signal, heading_schedule)
from . import errors

__version__ = "0.1.0"
