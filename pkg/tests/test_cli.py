import io
import json

import pytest

from pacta import parse, shy_dancers
from pacta.cli import main

from helpers import DATA


def path(name):
    return str(DATA / name)


@pytest.fixture
def run(capsys, monkeypatch):
    def invoke(*argv, stdin=None):
        if stdin is not None:
            monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke


class TestValidate:
    def test_clean_file_prints_ok(self, run):
        code, out, err = run("validate", path("c1.ces"))
        assert (code, out, err) == (0, "ok\n", "")

    def test_broken_file_lists_findings_and_exits_one(self, run):
        code, out, err = run("validate", path("broken.ces"))
        assert code == 1
        assert err == ""
        assert "line 3: [unknown-directive]" in out
        assert "line 4: [self-conflict]" in out
        assert "[undeclared-event]" in out
        assert "[unknown-participant]" in out

    def test_json_report(self, run):
        code, out, _ = run("validate", path("broken.ces"), "--json")
        assert code == 1
        payload = json.loads(out)
        assert {d["code"] for d in payload["diagnostics"]} == {
            "unknown-directive",
            "self-conflict",
            "undeclared-event",
            "unknown-participant",
        }
        assert all({"line", "column", "message"} <= d.keys() for d in payload["diagnostics"])


class TestProve:
    def test_lists_provable_atoms(self, run):
        assert run("prove", path("delta3.ces")) == (0, "a\nb\n", "")

    def test_json(self, run):
        code, out, _ = run("prove", path("delta3.ces"), "--json")
        assert code == 0
        assert json.loads(out) == {"provable": ["a", "b"]}

    def test_reads_stdin_with_dash(self, run):
        code, out, _ = run("prove", "-", stdin="agent A\nclause a\n")
        assert (code, out) == (0, "a\n")

    def test_global_json_flag_position_is_irrelevant(self, run):
        first = run("--json", "prove", path("delta3.ces"))
        second = run("prove", path("delta3.ces"), "--json")
        assert first == second


class TestTraces:
    def test_one_trace_per_line_shortest_first(self, run):
        code, out, _ = run("traces", path("delta4.ces"))
        assert code == 0
        assert out == "(empty)\na b\nb a\n"

    def test_max_caps_the_enumeration(self, run):
        _, out, _ = run("traces", path("delta4.ces"), "--max", "2")
        assert out == "(empty)\na b\n"

    def test_json(self, run):
        _, out, _ = run("traces", path("delta4.ces"), "--json")
        assert json.loads(out) == {"traces": [[], ["a", "b"], ["b", "a"]]}

    def test_negative_max_is_a_precondition_error(self, run):
        code, _, err = run("traces", path("delta4.ces"), "--max", "-1")
        assert code == 3
        assert err.startswith("error:")


class TestCheckTrace:
    def test_yes_and_no(self, run):
        assert run("check-trace", path("delta3.ces"), "--trace", "a,b") == (0, "yes\n", "")
        assert run("check-trace", path("delta3.ces"), "--trace", "b,a") == (1, "no\n", "")

    def test_empty_trace_is_always_a_trace(self, run):
        assert run("check-trace", path("delta3.ces"), "--trace", "")[0] == 0

    def test_json(self, run):
        _, out, _ = run("check-trace", path("delta3.ces"), "--trace", "b,a", "--json")
        assert json.loads(out) == {"is_trace": False}

    def test_unknown_atoms_exit_three(self, run):
        code, _, err = run("check-trace", path("delta3.ces"), "--trace", "a,zz")
        assert code == 3
        assert "unknown atoms" in err


class TestSetValuedCommands:
    def test_urgent_defaults_to_the_empty_past(self, run):
        assert run("urgent", path("delta1.ces")) == (0, "a\n", "")
        assert run("urgent", path("delta1.ces"), "--past", "a") == (0, "b\n", "")

    def test_prudent_and_reachable(self, run):
        assert run("prudent", path("c3.ces")) == (0, "a\n", "")
        assert run("reachable", path("c3.ces")) == (0, "a\nb\n", "")

    def test_conflicted_spec_is_a_precondition_error_for_prudent(self, run):
        code, _, err = run("prudent", path("e5.ces"))
        assert code == 3
        assert "conflict-free" in err


class TestCredits:
    def test_per_prefix_ledger(self, run):
        code, out, _ = run("credits", path("c3.ces"), "--play", "b,a")
        assert code == 0
        assert out == "after (empty): (empty)\nafter b: b\nafter b,a: b\n"

    def test_json(self, run):
        _, out, _ = run("credits", path("c3.ces"), "--play", "b,a", "--json")
        assert json.loads(out) == {
            "play": ["b", "a"],
            "per_prefix": [[], ["b"], ["b"]],
            "final": ["b"],
        }

    def test_invalid_play_exits_three(self, run):
        assert run("credits", path("c3.ces"), "--play", "a,a")[0] == 3


class TestVerdictAndAgree:
    def test_verdict_rows(self, run):
        code, out, _ = run("verdict", path("c3.ces"), "--play", "b,a")
        assert code == 0
        assert out == (
            "A: innocent=yes credit_free=yes wins=yes\n"
            "B: innocent=yes credit_free=no wins=no\n"
        )

    def test_agree_yes(self, run):
        assert run("agree", path("c1.ces")) == (0, "agreement: yes\nprovable: a b\n", "")

    def test_agree_no(self, run):
        assert run("agree", path("c2.ces")) == (1, "agreement: no\nprovable: (empty)\n", "")

    def test_agree_json(self, run):
        code, out, _ = run("--json", "agree", path("c2.ces"))
        assert code == 1
        assert json.loads(out) == {"agreement": False, "provable": []}

    def test_conflicted_spec_exits_three(self, run):
        assert run("agree", path("e5.ces"))[0] == 3


class TestStrategyAndSimulate:
    def test_offers_one_per_line_and_nothing_when_empty(self, run):
        assert run("strategy", path("c3.ces"), "--participant", "A") == (0, "a\n", "")
        assert run("strategy", path("c3.ces"), "--participant", "A", "--past", "a") == (0, "", "")

    def test_strategy_json(self, run):
        _, out, _ = run("strategy", path("c3.ces"), "--participant", "A", "--json")
        assert json.loads(out) == {"participant": "A", "past": [], "offers": ["a"]}

    def test_unknown_participant_exits_three(self, run):
        assert run("strategy", path("c3.ces"), "--participant", "Z")[0] == 3

    def test_simulate_plays_the_whole_contract(self, run):
        code, out, _ = run("simulate", path("c1.ces"))
        assert code == 0
        assert out.splitlines()[0] == "play: a,b"
        assert all("wins=yes" in line for line in out.splitlines()[1:])

    def test_simulate_is_reproducible_per_seed(self, run):
        first = run("simulate", path("or_payoffs.ces"), "--seed", "7")
        second = run("simulate", path("or_payoffs.ces"), "--seed", "7")
        assert first == second

    def test_simulate_json(self, run):
        _, out, _ = run("simulate", path("c1.ces"), "--json")
        payload = json.loads(out)
        assert payload["play"] == ["a", "b"]
        assert payload["seed"] == 0
        assert payload["participants"]["B"]["wins"] is True

    def test_simulate_needs_total_payoffs(self, run):
        code, _, err = run("simulate", path("delta1.ces"))
        assert code == 3
        assert "payoff" in err


class TestEncode:
    def test_prints_the_tag_theory_as_a_spec(self, run):
        code, out, _ = run("encode", path("delta3.ces"))
        assert code == 0
        assert out == (
            "agent T owns !a !b R$a R$b U$a U$b\n"
            "clause R$a <- U$a\n"
            "clause R$b <- R$a\n"
            "clause R$b <- U$b\n"
            "clause U$a <- !a\n"
            "clause U$a <<- R$b\n"
            "clause U$b <- !a\n"
            "clause U$b <- !b\n"
        )

    def test_json_carries_atoms_and_clauses(self, run):
        _, out, _ = run("encode", path("delta3.ces"), "--json")
        payload = json.loads(out)
        assert payload["atoms"] == ["!a", "!b", "R$a", "R$b", "U$a", "U$b"]
        assert len(payload["clauses"]) == 7
        assert {"head", "body", "kind"} == payload["clauses"][0].keys()


class TestGen:
    def test_shy_dancers_text_parses_back(self, run):
        code, out, _ = run("gen", "shy-dancers", "--n", "2")
        assert code == 0
        assert parse(out) == shy_dancers(2)

    def test_circular_cells_flag(self, run):
        _, out, _ = run("gen", "shy-dancers", "--n", "3", "--circular", "1.1,2.3")
        assert parse(out) == shy_dancers(3, circular=[(1, 1), (2, 3)])

    def test_json_wraps_the_text(self, run):
        _, out, _ = run("gen", "shy-dancers", "--n", "2", "--json")
        assert parse(json.loads(out)["text"]) == shy_dancers(2)

    def test_bad_cell_and_tiny_grid_exit_three(self, run):
        assert run("gen", "shy-dancers", "--n", "3", "--circular", "zz")[0] == 3
        assert run("gen", "shy-dancers", "--n", "1")[0] == 3


class TestOracle:
    def test_oracle_prove_matches_the_fast_command(self, run):
        for name in ("delta1.ces", "delta2.ces", "delta3.ces", "delta4.ces"):
            assert run("oracle", "prove", path(name)) == run("prove", path(name))

    def test_oracle_traces_matches_the_fast_command(self, run):
        for name in ("delta3.ces", "delta4.ces"):
            assert run("oracle", "traces", path(name)) == run("traces", path(name))

    def test_oracle_prudence_handles_conflicted_specs(self, run):
        assert run("oracle", "prudence", path("e5.ces"), "--past", "a") == (0, "b\nc\n", "")

    def test_oracle_prudence_refuses_large_specs(self, run):
        code, _, err = run("oracle", "prudence", path("star.ces"))
        assert code == 3
        assert "at most 6 events" in err


class TestErrorChannel:
    def test_missing_file(self, run):
        code, out, err = run("prove", "nope.ces")
        assert code == 2
        assert out == ""
        assert err.startswith("error:")

    def test_parse_failure_reports_diagnostics_on_stderr(self, run):
        code, out, err = run("prove", path("broken.ces"))
        assert code == 2
        assert out == ""
        assert "[undeclared-event]" in err

    def test_unknown_command(self, run):
        assert run("nonsense")[0] == 2

    def test_missing_required_argument(self, run):
        assert run("check-trace", path("delta3.ces"))[0] == 2

    def test_no_arguments_at_all(self, run):
        assert run()[0] == 2
