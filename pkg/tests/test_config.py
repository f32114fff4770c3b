import pytest

from config import run_config
from config.config import Config, TrainConfig
from utils.errors import BadInput, NotFoundError, ValidationError
from utils.schemas import validate_train_config


def test_defaults_follow_environment_settings():
    config = TrainConfig()
    assert config.weights == Config.default_weights()
    assert config.adam == Config.default_adam()
    assert config.image_size == (Config.IMAGE_SIZE, Config.IMAGE_SIZE)


def test_history_path_defaults_next_to_model():
    assert TrainConfig(out='runs/m.dstg').history_path == 'runs/m.dstg.history.jsonl'
    assert TrainConfig(out='runs/m.dstg', history='h.jsonl').history_path == 'h.jsonl'
    assert TrainConfig().history_path is None


def test_with_weights_leaves_original():
    base = TrainConfig()
    changed = base.with_weights(lambda_b=0.0)
    assert changed.weights.lambda_b == 0.0
    assert base.weights.lambda_b == Config.LAMBDA_B


class TestRunConfig:

    def test_render_then_parse_is_identity(self):
        config = TrainConfig(decoders=4, bits=15, image_size=(24, 32), epochs=7, batch_size=5,
                             seed=0xFFFFFFFFFFFFFFFF, checkpoint_interval=3, out='m.dstg')
        config = config.with_weights(lambda_m=2 / 4, lambda_b=1 / 6, lambda_a=1e-3)
        assert run_config.parse(run_config.render(config)) == config

    def test_comments_and_blank_lines(self):
        text = '# comment\n\n  decoders = 3\n# bits = 9\nbits=12\n'
        config = run_config.parse(text)
        assert (config.decoders, config.bits) == (3, 12)

    def test_overrides_win(self):
        config = run_config.parse('epochs = 5\nseed = 1\n', {'epochs': 9, 'seed': None})
        assert (config.epochs, config.seed) == (9, 1)

    def test_unknown_key(self):
        with pytest.raises(BadInput) as err:
            run_config.parse('learning_rate = 0.1\n')
        assert err.value.error_code == 'VAL_003'

    def test_line_without_equals(self):
        with pytest.raises(BadInput) as err:
            run_config.parse('decoders 3\n')
        assert err.value.error_code == 'VAL_002'

    @pytest.mark.parametrize('text,field', [
        ('decoders = 1', 'decoders'),
        ('batch_size = 1', 'batch_size'),
        ('lambda_b = -0.5', 'lambda_b'),
        ('beta1 = 1.0', 'beta1'),
        ('bits = many', 'bits'),
    ])
    def test_invalid_values(self, text, field):
        with pytest.raises(ValidationError) as err:
            run_config.parse(text)
        assert err.value.error_code == 'VAL_001'
        assert field in err.value.to_dict()['field_errors']

    def test_file_round_trip(self, tmp_path):
        path = str(tmp_path / 'run.cfg')
        config = TrainConfig(epochs=3, seed=42)
        run_config.save(path, config)
        assert run_config.load(path) == config

    def test_missing_file(self, tmp_path):
        with pytest.raises(NotFoundError):
            run_config.load(str(tmp_path / 'absent.cfg'))


def test_linear_decoders_survive_render_and_parse():
    config = TrainConfig(decoder_sigmoid=False, epochs=2)
    assert run_config.parse(run_config.render(config)) == config
    assert run_config.parse('decoder_sigmoid = false\n').decoder_sigmoid is False


class TestValidateTrainConfig:

    def test_defaults_pass(self):
        validate_train_config(TrainConfig())

    def test_field_errors_reported(self):
        with pytest.raises(ValidationError) as err:
            validate_train_config(TrainConfig(batch_size=1, epochs=0))
        assert err.value.error_code == 'VAL_001'
        assert {'batch_size', 'epochs'} <= set(err.value.to_dict()['field_errors'])
