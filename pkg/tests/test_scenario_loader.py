from pathlib import Path

import pytest

from utils.exceptions import ScenarioError
from utils.scenario_loader import load_scenario, parse_scenario

SCENARIO_DIR = Path(__file__).resolve().parent.parent / 'scenarios'


def minimal(**sections):
    data = {
        'lattice': {'n_sites': 64},
        'state': {'kind': 'gaussian', 'center': 10, 'width': 4.0, 'momentum_index': 3},
        'schedule': {'total_time': 10.0},
    }
    data.update(sections)
    return data


class TestLoadScenario:
    @pytest.mark.parametrize('path', sorted(SCENARIO_DIR.glob('*.toml')), ids=lambda p: p.stem)
    def test_bundled_scenarios_load(self, path):
        scenario = load_scenario(path)
        assert scenario.name == path.stem
        assert scenario.lattice.n_sites == 256

    def test_moving_packet_scenario(self):
        scenario = load_scenario(SCENARIO_DIR / 'moving_packet_pvm.toml')
        assert scenario.initial_state.packet.momentum_index == 31
        assert scenario.measurement.partition.n_regions == 7
        assert scenario.schedule.measurement_interval == 1.0
        assert scenario.schedule.record_times == (0.0, 60.0, 80.0, 100.0, 140.0, 180.0, 200.0, 240.0, 360.0)
        assert scenario.output_path == 'out/moving_packet_pvm'

    def test_pointer_scenario(self):
        scenario = load_scenario(SCENARIO_DIR / 'stationary_pointer.toml')
        assert scenario.measurement.pointer.alpha == 0.2
        assert scenario.measurement.pointer.distance_convention == 'minimal_image'

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioError, match='cannot read'):
            load_scenario(tmp_path / 'nope.toml')

    def test_invalid_toml(self, tmp_path):
        path = tmp_path / 'broken.toml'
        path.write_text('[lattice\nn_sites = 64\n')
        with pytest.raises(ScenarioError, match='invalid TOML'):
            load_scenario(path)

    def test_errors_name_the_file(self, tmp_path):
        path = tmp_path / 'odd.toml'
        path.write_text('[lattice]\nn_sites = 100\n[schedule]\ntotal_time = 1.0\n')
        with pytest.raises(ScenarioError, match='odd.toml'):
            load_scenario(path)


class TestParseScenario:
    def test_defaults(self):
        scenario = parse_scenario({'schedule': {'total_time': 5.0}}, name='bare')
        assert scenario.lattice.n_sites == 256
        assert scenario.initial_state.packet.center == 128
        assert scenario.initial_state.packet.width == 8.0
        assert scenario.measurement.kind == 'none'
        assert scenario.schedule.record_times == (0.0, 5.0)
        assert scenario.output_path == 'out/bare'

    def test_interval_none(self):
        data = minimal(schedule={'total_time': 10.0, 'interval': 'none'})
        assert parse_scenario(data).schedule.measurement_interval is None

    def test_position_eigenstate(self):
        scenario = parse_scenario(minimal(state={'kind': 'position_eigenstate', 'site': 40}))
        assert scenario.initial_state.site == 40

    def test_custom_kernel(self):
        values = [1.0] + [0.0] * 63
        data = minimal(measurement={'kind': 'custom_kernel', 'values': values}, schedule={'total_time': 2.0, 'interval': 1.0})
        assert parse_scenario(data).measurement.kernel.n_sites == 64

    def test_report_regions(self):
        scenario = parse_scenario(minimal(observables={'regions': 4}))
        assert scenario.reporting_partition().n_regions == 4

    @pytest.mark.parametrize('data', [
        minimal(lattice={'n_sites': 100}),
        minimal(lattice={'n_sites': '64'}),
        minimal(extra={'x': 1}),
        minimal(state={'kind': 'plane_wave'}),
        minimal(state={'kind': 'gaussian', 'center': 64}),
        minimal(state={'kind': 'gaussian', 'momentum_index': 2.5}),
        minimal(state={'kind': 'position_eigenstate', 'site': -1}),
        minimal(measurement={'kind': 'region_pvm'}),
        minimal(measurement={'kind': 'region_pvm', 'regions': 0}),
        minimal(measurement={'kind': 'pointer', 'alpha': -0.2}),
        minimal(measurement={'kind': 'pointer', 'alpha': 0.01}),
        minimal(measurement={'kind': 'pointer', 'alpha': 1.0, 'distance': 'euclidean'}),
        minimal(measurement={'kind': 'custom_kernel', 'values': [1.0, 0.0]}),
        minimal(measurement={'kind': 'custom_kernel', 'values': [1.0] + [2.0] * 63}),
        minimal(measurement={'kind': 'teleport'}),
        minimal(schedule={}),
        minimal(schedule={'total_time': 10.0, 'interval': 0}),
        minimal(schedule={'total_time': 10.0, 'record_times': [0, 5, 3]}),
        minimal(schedule={'total_time': 10.0, 'record_times': 5}),
        minimal(schedule={'total_time': 10.0, 'record_times': [0, 'five']}),
        minimal(schedule={'total_time': float('inf')}),
        minimal(schedule={'total_time': 10.0, 'interval': float('nan')}),
        minimal(lattice={'n_sites': 64, 'display_time_factor': float('inf')}),
        minimal(measurement={'kind': 'custom_kernel', 'values': ['a'] * 64}),
        minimal(lattice=[1, 2]),
    ], ids=lambda d: str(d)[:60])
    def test_invalid_scenarios(self, data):
        with pytest.raises(ScenarioError):
            parse_scenario(data)
