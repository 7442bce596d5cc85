# src/rydberg/__init__.py
from .chain import ChainEvolver, RydbergChainConfig, evolve, hamiltonian_matrix
from .schedules import PulseSchedule, PulseSegment, measurement_schedule, preparation_schedule
from .experiment import ObservableSet, h_sweep, measure_observables, prepare_graph_state_via_pulses

__all__ = [
    'ChainEvolver', 'RydbergChainConfig', 'evolve', 'hamiltonian_matrix',
    'PulseSchedule', 'PulseSegment', 'measurement_schedule', 'preparation_schedule',
    'ObservableSet', 'h_sweep', 'measure_observables', 'prepare_graph_state_via_pulses',
]
