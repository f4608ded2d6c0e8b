import numpy as np
import pytest

from scenario import StateSpec
from states import GaussianPacketSpec
from utils.constants import SWEEP_COLUMNS
from utils.exceptions import ScenarioError
from utils.sweeps import (
    forward_window, interval_label, interval_variants, parse_interval_list, parse_region_list, region_variants,
    run_variants, sweep_intervals, sweep_table, with_interval, with_regions
)


class TestParsing:
    def test_interval_list(self):
        assert parse_interval_list('none,4,2,1') == [None, 4.0, 2.0, 1.0]
        assert parse_interval_list(' None , 0.5 ') == [None, 0.5]

    @pytest.mark.parametrize('text', ['', 'fast', '2,-1', '0'])
    def test_invalid_interval_lists(self, text):
        with pytest.raises(ScenarioError):
            parse_interval_list(text)

    def test_region_list(self):
        assert parse_region_list('2,6,12') == [2, 6, 12]
        with pytest.raises(ScenarioError):
            parse_region_list('2,six')
        with pytest.raises(ScenarioError):
            parse_region_list(' , ')

    def test_labels(self):
        assert interval_label(None) == 'none'
        assert interval_label(2.0) == 'interval=2'


class TestVariants:
    def test_interval_none_drops_the_measurement_but_keeps_regions(self, make_scenario, pvm):
        scenario = make_scenario(measurement=pvm(256, 6), interval=1.0)
        free = with_interval(scenario, None)
        assert free.measurement.kind == 'none'
        assert free.reporting_partition().n_regions == 7

    def test_interval_variant(self, make_scenario, pvm):
        variant = with_interval(make_scenario(measurement=pvm(256, 6), interval=1.0), 4.0)
        assert variant.schedule.measurement_interval == 4.0
        assert variant.measurement.kind == 'region_pvm'

    def test_interval_sweep_needs_a_measurement(self, make_scenario):
        with pytest.raises(ScenarioError):
            with_interval(make_scenario(), 2.0)

    def test_region_variant(self, make_scenario):
        variant = with_regions(make_scenario(interval=1.0), 12)
        assert variant.measurement.partition.n_regions == 13
        assert variant.report_partition is variant.measurement.partition

    def test_region_sweep_needs_an_interval(self, make_scenario):
        with pytest.raises(ScenarioError):
            with_regions(make_scenario(), 6)

    def test_variant_labels_keep_order(self, make_scenario, pvm):
        scenario = make_scenario(measurement=pvm(256, 6), interval=1.0)
        assert list(interval_variants(scenario, [None, 4.0, 1.0])) == ['none', 'interval=4', 'interval=1']
        assert list(region_variants(scenario, [2, 6])) == ['regions=2', 'regions=6']

    def test_forward_window(self, make_scenario):
        assert forward_window(make_scenario()) == (72, 200)
        centred = make_scenario(state=StateSpec('gaussian', GaussianPacketSpec(128, 8.0, 0)))
        assert forward_window(centred) == (192, 320)


class TestRunVariants:
    @pytest.fixture
    def small(self, make_scenario, pvm):
        return make_scenario(n_sites=64, measurement=pvm(64, 4), interval=1.0, total_time=6.0,
                             state=StateSpec('gaussian', GaussianPacketSpec(14, 4.0, 12)), record_times=(0.0, 3.0, 6.0))

    def test_parallel_matches_serial(self, small):
        variants = interval_variants(small, [None, 2.0, 1.0])
        serial = run_variants(variants, n_jobs=1)
        parallel = run_variants(variants, n_jobs=2)
        assert list(parallel) == list(serial)
        for label in serial:
            for a, b in zip(serial[label], parallel[label]):
                assert np.array_equal(a.position_dist, b.position_dist)

    def test_sweep_table(self, small):
        variants = interval_variants(small, [None, 1.0])
        frame = sweep_table(variants, sweep_intervals(small, [None, 1.0]))
        assert list(frame.columns) == SWEEP_COLUMNS
        assert len(frame) == 6
        assert list(frame['label'].unique()) == ['none', 'interval=1']
        first = frame[frame['time_display'] == 0.0]
        np.testing.assert_allclose(first['initial_region_mass'], first['initial_region_mass'].iloc[0])
        assert (frame['purity'] <= 1.0 + 1e-12).all()
