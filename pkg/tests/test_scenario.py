import pytest

from utils.errors import BadInput
from utils.scenario import run_scenario


def test_classic_walkthrough_passes():
    transcript = run_scenario('classic', seed=3)
    assert transcript.passed
    text = transcript.render()
    assert text.endswith('result: PASS\n')
    assert 'forged pad' in text


@pytest.mark.parametrize('seed', [0, 1, 2, 12345])
def test_classic_walkthrough_for_several_seeds(seed):
    assert run_scenario('classic', seed=seed, bits=61).passed


def test_classic_is_deterministic():
    assert run_scenario('classic', seed=8).render() == run_scenario('classic', seed=8).render()


def test_classic_with_supplied_cover(random_image):
    assert run_scenario('classic', seed=1, cover=random_image(), bits=30).passed


def test_untrained_model_misses_the_budget(tiny_model):
    transcript = run_scenario('dnn', seed=0, model=tiny_model)
    assert not transcript.passed
    assert transcript.render().endswith('result: FAIL\n')
    assert 'coerced extraction (fake decoder)' in transcript.render()


def test_dnn_needs_a_model():
    with pytest.raises(BadInput):
        run_scenario('dnn')


def test_dnn_cover_must_match_model(tiny_model, random_image):
    with pytest.raises(BadInput) as err:
        run_scenario('dnn', model=tiny_model, cover=random_image(20, 20))
    assert err.value.error_code == 'NET_003'


def test_unknown_mode():
    with pytest.raises(ValueError):
        run_scenario('lsb')
