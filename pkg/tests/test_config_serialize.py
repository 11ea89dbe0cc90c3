import math

import pytest

from imspec.config import DEFAULT, RunConfig
from imspec.serialize import dumps, fmt_float, ladder_csv


def test_defaults_valid():
    assert DEFAULT.circle_tol == 1e-9
    assert DEFAULT.k_min < DEFAULT.k_max <= 24
    assert DEFAULT.worker_count >= 1


@pytest.mark.parametrize("kwargs", [
    {"circle_tol": 0.0},
    {"quad_tol": -1e-9},
    {"k_min": 2},
    {"k_min": 10, "k_max": 10},
    {"k_max": 25},
    {"out_format": "xml"},
])
def test_invalid_configs_rejected(kwargs):
    with pytest.raises(ValueError):
        RunConfig(**kwargs)


def test_from_toml(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text("k_max = 12\nthreads = 3\ncircle_tol = 1e-8\n")
    cfg = RunConfig.from_toml(str(p))
    assert cfg.k_max == 12 and cfg.threads == 3 and cfg.circle_tol == 1e-8


def test_from_toml_rejects_unknown_keys(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text("nope = 1\n")
    with pytest.raises(ValueError):
        RunConfig.from_toml(str(p))


def test_with_overrides_ignores_none():
    cfg = DEFAULT.with_overrides(threads=None, k_max=12)
    assert cfg.k_max == 12 and cfg.threads == DEFAULT.threads


def test_float_formatting():
    assert fmt_float(57.6) == "57.6"
    assert fmt_float(1 / 3) == "0.3333333333333333"
    assert float(fmt_float(1 / 3)) == 1 / 3  # round-trip exact
    assert fmt_float(float("nan")) == "null"
    assert fmt_float(math.inf) == "null"


def test_dumps_deterministic_and_typed():
    payload = {"a": 1, "b": [1.5, True, None, "x\"y"], "c": {"z": 2 + 3j}}
    s1, s2 = dumps(payload), dumps(payload)
    assert s1 == s2
    assert s1 == '{"a":1,"b":[1.5,true,null,"x\\"y"],"c":{"z":{"re":2.0,"im":3.0}}}'


def test_dumps_uses_to_jsonable():
    class Thing:
        def to_jsonable(self):
            return {"k": 1}

    assert dumps([Thing()]) == '[{"k":1}]'


def test_dumps_rejects_unknown_types():
    with pytest.raises(TypeError):
        dumps(object())


def test_ladder_csv_format():
    text = ladder_csv([(6, 0.984375, 1.25, 4.158883083359672)])
    lines = text.strip().splitlines()
    assert lines[0] == "k,r,logI,abscissa"
    assert lines[1].startswith("6,0.984375,1.25,")
