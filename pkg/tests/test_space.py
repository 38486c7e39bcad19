import json

import numpy as np
import pytest

from sequd_opt.space import ParamSpec, SearchSpace, SpaceError


def make_space():
    return SearchSpace(
        [
            ParamSpec("lr", "continuous", 1e-5, 1e-1, scale="log10"),
            ParamSpec("depth", "integer", 1, 9),
            ParamSpec("kernel", "categorical", categories=("rbf", "poly", "linear")),
        ]
    )


class TestParamSpec:
    def test_continuous_linear_decode(self):
        p = ParamSpec("x", "continuous", -2.0, 6.0)
        assert p.decode(np.array([0.0])) == pytest.approx(-2.0)
        assert p.decode(np.array([0.5])) == pytest.approx(2.0)
        assert p.decode(np.array([1.0])) == pytest.approx(6.0)

    def test_continuous_log10_decode(self):
        p = ParamSpec("x", "continuous", 1e-4, 1.0, scale="log10")
        assert p.decode(np.array([0.0])) == pytest.approx(1e-4)
        assert p.decode(np.array([0.5])) == pytest.approx(1e-2)
        assert p.decode(np.array([1.0])) == pytest.approx(1.0)

    def test_continuous_log2_decode(self):
        p = ParamSpec("x", "continuous", 1.0, 16.0, scale="log2")
        assert p.decode(np.array([0.25])) == pytest.approx(2.0)
        assert p.decode(np.array([0.75])) == pytest.approx(8.0)

    def test_integer_rounds_half_up(self):
        p = ParamSpec("k", "integer", 0, 4)
        # unit 0.375 -> 1.5 -> rounds up to 2
        assert p.decode(np.array([0.375])) == 2
        assert p.decode(np.array([0.0])) == 0
        assert p.decode(np.array([1.0])) == 4
        assert isinstance(p.decode(np.array([0.5])), int)

    def test_integer_clamped_to_bounds(self):
        p = ParamSpec("k", "integer", 2, 5)
        assert p.decode(np.array([0.999999])) == 5
        assert p.decode(np.array([1e-9])) == 2

    def test_categorical_argmax(self):
        p = ParamSpec("c", "categorical", categories=("a", "b", "c"))
        assert p.width == 3
        assert p.decode(np.array([0.1, 0.9, 0.3])) == "b"

    def test_categorical_tie_takes_first(self):
        p = ParamSpec("c", "categorical", categories=("a", "b", "c"))
        assert p.decode(np.array([0.5, 0.5, 0.2])) == "a"

    @pytest.mark.parametrize(
        "kw",
        [
            dict(name="x", kind="continuous", lo=1.0, hi=1.0),
            dict(name="x", kind="continuous", lo=2.0, hi=1.0),
            dict(name="x", kind="continuous", lo=None, hi=1.0),
            dict(name="x", kind="continuous", lo=-1.0, hi=1.0, scale="log10"),
            dict(name="x", kind="weird", lo=0.0, hi=1.0),
            dict(name="x", kind="categorical", categories=()),
            dict(name="x", kind="categorical", categories=("a",)),
            dict(name="", kind="continuous", lo=0.0, hi=1.0),
        ],
    )
    def test_invalid_specs(self, kw):
        with pytest.raises(SpaceError):
            ParamSpec(**kw)


class TestSearchSpace:
    def test_dimension_sums_widths(self):
        assert make_space().dimension == 1 + 1 + 3

    def test_decode_returns_named_dict(self):
        sp = make_space()
        out = sp.decode(np.array([0.5, 0.5, 0.2, 0.9, 0.1]))
        assert set(out) == {"lr", "depth", "kernel"}
        assert out["lr"] == pytest.approx(10 ** (-3))
        assert out["depth"] == 5
        assert out["kernel"] == "poly"

    def test_decode_rejects_wrong_length(self):
        with pytest.raises(SpaceError):
            make_space().decode(np.zeros(4))

    def test_duplicate_names_rejected(self):
        with pytest.raises(SpaceError):
            SearchSpace(
                [
                    ParamSpec("x", "continuous", 0.0, 1.0),
                    ParamSpec("x", "integer", 0, 3),
                ]
            )

    def test_unit_box(self):
        sp = SearchSpace.unit_box(3)
        assert sp.dimension == 3
        out = sp.decode(np.array([0.0, 0.5, 1.0]))
        assert list(out.values()) == [0.0, 0.5, 1.0]

    def test_from_bounds(self):
        sp = SearchSpace.from_bounds([(-5.0, 10.0), (0.0, 15.0)])
        out = sp.decode(np.array([0.0, 1.0]))
        assert list(out.values()) == [-5.0, 15.0]


class TestJson:
    def test_roundtrip(self):
        text = json.dumps(
            [
                {"name": "lr", "kind": "continuous", "lo": 1e-5, "hi": 1e-1,
                 "scale": "log10"},
                {"name": "depth", "kind": "integer", "lo": 1, "hi": 9},
                {"name": "kernel", "kind": "categorical",
                 "categories": ["rbf", "poly", "linear"]},
            ]
        )
        sp = SearchSpace.from_json(text)
        assert sp.dimension == 5
        assert sp.column_names()[0].startswith("lr")

    def test_error_names_offending_entry(self):
        text = json.dumps([{"name": "bad", "kind": "continuous",
                            "lo": 3, "hi": 1}])
        with pytest.raises(SpaceError, match="bad"):
            SearchSpace.from_json(text)

    def test_rejects_non_array(self):
        with pytest.raises(SpaceError):
            SearchSpace.from_json('{"a": 1}')

    def test_rejects_unknown_kind(self):
        text = json.dumps([{"name": "x", "kind": "float", "lo": 0, "hi": 1}])
        with pytest.raises(SpaceError):
            SearchSpace.from_json(text)

    def test_from_file(self, tmp_path):
        path = tmp_path / "space.json"
        path.write_text(
            json.dumps([{"name": "x", "kind": "continuous",
                         "lo": 0.0, "hi": 2.0}])
        )
        sp = SearchSpace.from_file(path)
        assert sp.decode(np.array([0.25]))["x"] == pytest.approx(0.5)
