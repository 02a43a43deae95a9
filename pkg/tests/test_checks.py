import json

import pytest

from strip_homology.checks import CHECKS, load_policy, run_policy
from strip_homology.errors import InvalidInputError


def _policy(tmp_path, rules):
    path = tmp_path / "policy.json"
    path.write_text(
        json.dumps(
            {
                "meta": {"suite": "test", "version": "0"},
                "scoring": {"base": 1.0, "deductions": {"warning": 0.1, "fail": 1.0}, "aggregation": "min"},
                "rules": rules,
            }
        ),
        encoding="utf-8",
    )
    return path


def _rule(rule_id, target, params, severity="fail", level="quick"):
    return {"id": rule_id, "level": level, "target": target, "assert": params, "severity": severity, "message": rule_id}


def test_packaged_policy_is_valid():
    policy = load_policy()
    assert {rule["target"] for rule in policy["rules"]} <= set(CHECKS)
    assert any(rule["level"] == "full" for rule in policy["rules"])


def test_unknown_target_is_rejected(tmp_path):
    path = _policy(tmp_path, [_rule("X-1", "no_such_check", {})])
    with pytest.raises(InvalidInputError):
        load_policy(path)


def test_schema_violation_is_rejected(tmp_path):
    path = _policy(tmp_path, [{"id": "X-1", "target": "betti_value"}])
    with pytest.raises(InvalidInputError):
        load_policy(path)


def test_unreadable_policy(tmp_path):
    with pytest.raises(RuntimeError):
        load_policy(tmp_path / "missing.json")


def test_passing_rules_give_ok(tmp_path):
    path = _policy(
        tmp_path,
        [
            _rule("B-1", "betti_value", {"n": 3, "w": 2, "j": 1, "expected": "7"}),
            _rule("D-1", "boundary_squared", {"kind": "strip", "n": 3, "w_or_k": 2}),
        ],
    )
    result = run_policy("quick", path=path)
    assert result.status == "ok"
    assert result.score == 1.0
    assert not result.failed


def test_failing_warning_gives_partial(tmp_path):
    path = _policy(tmp_path, [_rule("B-1", "betti_value", {"n": 3, "w": 2, "j": 1, "expected": "8"}, severity="warning")])
    result = run_policy("quick", path=path)
    assert result.status == "partial"
    assert result.score == pytest.approx(0.9)
    assert result.details[0].status == "warning"


def test_failing_rule_fails_the_run(tmp_path):
    path = _policy(
        tmp_path,
        [
            _rule("B-1", "betti_value", {"n": 3, "w": 2, "j": 1, "expected": "7"}),
            _rule("B-2", "betti_value", {"n": 3, "w": 2, "j": 0, "expected": "2"}),
        ],
    )
    result = run_policy("quick", path=path)
    assert result.status == "fail"
    assert result.failed
    assert result.score == 0.0


def test_crashing_check_is_a_failure(tmp_path):
    path = _policy(tmp_path, [_rule("B-1", "betti_value", {"n": 3})])
    result = run_policy("quick", path=path)
    assert result.status == "fail"
    assert "error" in result.details[0].comment


def test_levels_filter_rules(tmp_path):
    path = _policy(
        tmp_path,
        [
            _rule("B-1", "betti_value", {"n": 3, "w": 2, "j": 1, "expected": "7"}),
            _rule("B-2", "betti_value", {"n": 3, "w": 2, "j": 1, "expected": "7"}, level="full"),
        ],
    )
    assert len(run_policy("quick", path=path).details) == 1
    assert len(run_policy("full", path=path).details) == 2


@pytest.mark.slow
def test_quick_suite_passes():
    result = run_policy("quick")
    assert result.status == "ok", [detail.comment for detail in result.details if detail.status != "valid"]


@pytest.mark.parametrize(
    "target, params",
    [
        ("boundary_squared", {"kind": "unordered", "n_max": 6, "full_width": True}),
        ("boundary_equivariance", {"n_max": 3}),
        ("critical_vs_oracle", {"kind": "unordered", "n_max": 5, "w_max": 3, "p_values": [0, 2, 3]}),
        ("critical_vs_oracle", {"kind": "weighted", "seeds": 3, "n_max": 4, "weight_max": 2, "ring": "Z"}),
        ("order_matching", {"kind": "unordered", "n_max": 5, "w_max": 4, "p_values": [3]}),
        ("order_matching", {"kind": "strip", "n_max": 3}),
        ("barlength", {"n_max": 5}),
        ("dominant_term", {"j_max": 2, "w_max": 3}),
        ("unordered_growth", {"w": 3, "j_max": 1, "n_max": 10, "p_values": [0, 2]}),
    ],
)
def test_sweeping_checks_pass(target, params):
    passed, comment = CHECKS[target](params, 1, False)
    assert passed, comment


def test_weighted_sweep_is_reproducible():
    first = CHECKS["critical_vs_oracle"]({"kind": "weighted", "seeds": 2, "n_max": 4, "ring": "Z"}, 1, False)
    assert first == CHECKS["critical_vs_oracle"]({"kind": "weighted", "seeds": 2, "n_max": 4, "ring": "Z"}, 1, False)


def test_run_policy_passes_the_cell_limit(tmp_path, monkeypatch):
    monkeypatch.delenv("STRIP_HOMOLOGY_CELL_LIMIT", raising=False)
    path = _policy(tmp_path, [_rule("O-1", "critical_vs_oracle", {"kind": "strip", "n": 4, "w_or_k": 3, "ring": "Z"})])
    assert run_policy("quick", path=path).status == "ok"
    result = run_policy("quick", path=path, limit=5)
    assert result.status == "fail"
    assert "limit" in result.details[0].comment
