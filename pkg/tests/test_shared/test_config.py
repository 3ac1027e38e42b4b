"""
Tests for configuration management
"""

import pytest
import os
from shared.config.settings import AppConfig, get_config, reload_config
from shared.config.constants import PROFILES, RNG_STREAMS, EXIT_CODES, CSV_HEADERS, NUMERICS
from shared.models.data_models import ExperimentConfig, ExperimentKind
from shared.utils.error_handling import ConfigError

def test_app_config_creation():
    """Test AppConfig creation from environment"""
    config = AppConfig.from_env()

    assert config.runtime.workers == 1
    assert config.runtime.profile in PROFILES
    assert config.numerics.condition_limit == pytest.approx(1e12)
    assert config.log_level == 'WARNING'

def test_get_config():
    """Test global config getter"""
    config = get_config()
    assert isinstance(config, AppConfig)
    assert config.environment == 'test'

def test_config_to_dict():
    """Test config serialization"""
    config = AppConfig.from_env()
    config_dict = config.to_dict()

    assert 'runtime' in config_dict
    assert 'numerics' in config_dict
    assert config_dict['runtime']['workers'] == 1

def test_reload_config_reads_environment(monkeypatch):
    """Test reload picks up changed environment variables"""
    monkeypatch.setenv('DSIC_CONDITION_LIMIT', '1e8')
    monkeypatch.setenv('DSIC_PROFILE', 'unknown-profile')
    try:
        config = reload_config()
        assert config.numerics.condition_limit == pytest.approx(1e8)
        assert config.runtime.profile == 'desk'
    finally:
        monkeypatch.undo()
        reload_config()

def test_profile_constants():
    """Test desk and paper profiles carry the same keys"""
    assert set(PROFILES['desk']) == set(PROFILES['paper'])
    assert PROFILES['paper']['memory_lh'] == 100
    assert PROFILES['paper']['symbol_length'] == 1280

def test_rng_streams_are_distinct():
    """Test stream identifiers never collide"""
    assert len(set(RNG_STREAMS.values())) == len(RNG_STREAMS)

def test_exit_codes():
    """Test CLI exit code table"""
    assert EXIT_CODES == {'OK': 0, 'GENERAL_ERROR': 1, 'CONFIG_ERROR': 2, 'INVARIANT_VIOLATION': 3}

def test_experiment_config_from_profile():
    """Test profile defaults with overrides"""
    config = ExperimentConfig.from_profile('order_sweep', 'desk', trials=5)

    assert config.experiment is ExperimentKind.ORDER_SWEEP
    assert config.trials == 5
    assert config.memory_lh == PROFILES['desk']['memory_lh']
    assert config.data_length == PROFILES['desk']['data_symbols'] * PROFILES['desk']['symbol_length']

def test_experiment_config_unknown_profile():
    """Test unknown profile is a config error"""
    with pytest.raises(ConfigError):
        ExperimentConfig.from_profile('order_sweep', 'lab')

def test_experiment_config_unknown_experiment():
    """Test unknown experiment is a config error"""
    with pytest.raises(ConfigError):
        ExperimentConfig.from_profile('spectrum_sweep', 'desk')

@pytest.mark.parametrize("overrides,key", [
    ({'trials': 0}, 'trials'),
    ({'orders': [1, 4]}, 'orders'),
    ({'orders': [5, 3]}, 'orders'),
    ({'compare_order': 2}, 'compare_order'),
    ({'pilot_length': 4, 'memory_lh': 8}, 'pilot_length'),
    ({'pilot_distribution': 'uniform'}, 'pilot_distribution'),
    ({'truth_model': 'saleh'}, 'truth_model'),
    ({'noise_realizations': 1}, 'noise_realizations'),
    ({'orders': [1, 23]}, 'orders'),
    ({'compare_order': 23}, 'compare_order'),
    ({'iq_order': 25}, 'iq_order'),
    ({'truth_order': 23}, 'truth_order'),
    ({'drive_offsets_db': []}, 'drive_offsets_db'),
    ({'calibration_trials': 0}, 'calibration_trials')
])
def test_experiment_config_validation(overrides, key):
    """Test invalid values raise ConfigError naming the key"""
    with pytest.raises(ConfigError) as exc_info:
        ExperimentConfig.from_profile('order_sweep', 'desk', **overrides)
    assert exc_info.value.key == key
    assert exc_info.value.exit_code == EXIT_CODES['CONFIG_ERROR']

def test_experiment_config_accepts_largest_truth_order():
    """Test orders up to the RAPP projection limit are valid"""
    limit = NUMERICS['truth_max_order']
    config = ExperimentConfig.from_profile('order_sweep', 'desk', orders=[1, limit], truth_order=limit)
    assert config.orders[-1] == limit

def test_experiment_config_file_round_trip(temp_directory):
    """Test config file written by a run loads back to the same hash"""
    config = ExperimentConfig.from_profile('mimo_sweep', 'desk', master_seed=42, irr_db=[25.5, 40.0])
    path = os.path.join(temp_directory, 'config.txt')
    config.to_file(path)

    loaded = ExperimentConfig.from_file(path)
    assert loaded.config_hash() == config.config_hash()
    assert loaded.irr_db == [25.5, 40.0]
    assert loaded.master_seed == 42

def test_config_text_starts_with_schema_version():
    """Test canonical text layout"""
    text = ExperimentConfig.from_profile('iq_sweep', 'desk').to_text()
    lines = text.strip().split('\n')

    assert lines[0] == 'schema_version=1'
    keys = [line.split('=')[0] for line in lines[1:]]
    assert keys == sorted(keys)

def test_config_hash_changes_with_seed():
    """Test hash covers every value"""
    first = ExperimentConfig.from_profile('order_sweep', 'desk', master_seed=1)
    second = ExperimentConfig.from_profile('order_sweep', 'desk', master_seed=2)
    assert first.config_hash() != second.config_hash()

def test_config_file_missing_schema(temp_directory):
    """Test schema_version is mandatory in config files"""
    path = os.path.join(temp_directory, 'bad.cfg')
    with open(path, 'w') as f:
        f.write("experiment=order_sweep\ntrials=3\n")

    with pytest.raises(ConfigError) as exc_info:
        ExperimentConfig.from_file(path)
    assert exc_info.value.key == 'schema_version'

def test_config_file_unknown_key(temp_directory):
    """Test unknown keys are rejected"""
    path = os.path.join(temp_directory, 'bad.cfg')
    with open(path, 'w') as f:
        f.write("schema_version=1\nexperiment=order_sweep\ncolour=blue\n")

    with pytest.raises(ConfigError) as exc_info:
        ExperimentConfig.from_file(path)
    assert exc_info.value.key == 'colour'

def test_config_file_rejects_fractional_integer(temp_directory):
    """Test integer keys refuse fractional values"""
    path = os.path.join(temp_directory, 'bad.cfg')
    with open(path, 'w') as f:
        f.write("schema_version=1\nexperiment=order_sweep\ntrials=2.5\n")

    with pytest.raises(ConfigError):
        ExperimentConfig.from_file(path)

def test_config_file_not_found():
    """Test missing file"""
    with pytest.raises(ConfigError):
        ExperimentConfig.from_file('/nonexistent/run.cfg')

def test_sweep_header_layout():
    """Test summary CSV column order"""
    header = CSV_HEADERS['sweep']
    assert header[:2] == ['series', 'sweep_variable']
    assert header[-2:] == ['optimal_order', 'trials']
