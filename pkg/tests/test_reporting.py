import json
from fractions import Fraction

import numpy as np

from shiftopt.cocycle import Bounds
from shiftopt.reporting import SCHEMA, dumps, to_csv, to_jsonable, to_text
from shiftopt.selftest import CHECKS, run_selftest
from shiftopt.symbolic import Word


def test_to_jsonable():
    doc = to_jsonable({"a": Fraction(1, 3), "b": np.int64(2), "c": Word("01"), "d": Bounds(Fraction(1), None),
                       "e": np.array([1.5]), "f": np.bool_(True)})
    assert doc["a"] == "1/3" and doc["b"] == 2 and doc["c"] == "01" and doc["e"] == [1.5] and doc["f"] is True
    assert doc["d"]["one_sided"]


def test_dumps_is_sorted_and_tagged():
    text = dumps({"z": 1, "a": Fraction(1, 2)})
    assert json.loads(text) == {"schema": SCHEMA, "z": 1, "a": "1/2"}
    assert text == dumps({"a": Fraction(1, 2), "z": 1})
    assert text.endswith("\n")


def test_text_and_csv():
    rep = {"value": 0.123456789, "table": [{"n": 1, "v": "1/2"}, {"n": 10, "v": "1"}]}
    text = to_text(rep)
    assert "value  0.123457" in text
    assert text.splitlines()[-1].startswith("10")
    assert to_csv(rep).splitlines() == ["n,v", "1,1/2", "10,1"]
    assert to_csv({"x": 1}).splitlines() == ["key,value", "x,1"]


def test_selftest_all_pass():
    rep = run_selftest()
    assert rep["checks"] == len(CHECKS) and rep["failed"] == 0 and rep["passed"]
