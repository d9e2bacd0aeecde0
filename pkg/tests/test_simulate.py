"""Game execution: protocol, seeding, caps, tallies, and trace format."""

import json
import math
import random
from fractions import Fraction

import pytest

from richman import (
    Agent,
    BidDecision,
    GameState,
    ProtocolViolationError,
    batch_records,
    default_move_cap,
    derived_rng,
    derived_seed,
    estimate_random_turn_value,
    format_trace,
    make_agent,
    parse_game_graph,
    play_random_turn_game,
    play_richman_game,
    random_turn_move_cap,
    random_turn_stats,
    run_batch,
)

import corpus

F = Fraction


class FixedAgent(Agent):
    """Test stub: always the same decision."""

    def __init__(self, bid, move_to):
        self.decision = BidDecision(Fraction(bid), move_to)

    def decide(self, view, rng):
        return self.decision


@pytest.fixture()
def optimal_pair(fig1, fig1_costs):
    return (
        make_agent("optimal", fig1, fig1_costs, "blue"),
        make_agent("optimal", fig1, fig1_costs, "red"),
    )


def test_derived_seed_is_stable_and_sensitive():
    assert derived_seed(0, "tie", 0, 0) == 15220288310468689684
    assert derived_seed(5, "agent", 2, "blue") == 4860830734878008140
    assert derived_seed(0, "tie", 0, 0) != derived_seed(0, "tie", 0, 1)
    assert derived_rng(7, "x").random() == derived_rng(7, "x").random()


def test_single_step_game_record(star, star_costs):
    record = play_richman_game(
        star,
        make_agent("optimal", star, star_costs, "blue"),
        make_agent("optimal", star, star_costs, "red"),
        GameState("v", F(9, 10), F(1, 10)),
    )
    assert record.outcome == "BlueWins"
    assert record.move_cap == 30
    assert record.final_position == "b"
    (step,) = record.steps
    assert step.index == 0
    assert step.position == "v"
    assert step.blue_bid == F(7, 10)
    assert step.red_bid == F(1, 10)
    assert step.tie is None
    assert step.winner == "blue"
    assert step.transfer == F(7, 10)
    assert step.move_to == "b"
    assert step.blue_after == F(1, 5)
    assert step.red_after == F(4, 5)


def test_format_trace_bytes(star, star_costs):
    record = play_richman_game(
        star,
        make_agent("optimal", star, star_costs, "blue"),
        make_agent("optimal", star, star_costs, "red"),
        GameState("v", F(9, 10), F(1, 10)),
    )
    assert format_trace(record) == (
        "step 0 v 7/10 1/10 - blue 7/10 b 1/5 4/5\n"
        "outcome BlueWins steps 1 cap 30"
    )


def test_start_validation(fig1, fig1_costs, data_dir):
    blue = make_agent("optimal", fig1, fig1_costs, "blue")
    red = make_agent("optimal", fig1, fig1_costs, "red")
    with pytest.raises(ValueError, match="terminal"):
        play_richman_game(fig1, blue, red, GameState("b", F(1), F(1)))
    with pytest.raises(ValueError, match="unknown start"):
        play_richman_game(fig1, blue, red, GameState("zz", F(1), F(1)))
    with pytest.raises(ValueError, match="nonnegative"):
        play_richman_game(fig1, blue, red, GameState("v", F(-1), F(2)))
    with pytest.raises(ValueError, match="tiebreak"):
        play_richman_game(fig1, blue, red, GameState("v", F(1), F(1)), tiebreak="coin")
    bad = parse_game_graph((data_dir / "bad.rg").read_text())
    with pytest.raises(ValueError, match="invalid graph"):
        play_richman_game(bad, blue, red, GameState("v", F(1), F(1)))


def test_protocol_violations_are_attributed(fig1, fig1_costs):
    honest = make_agent("optimal", fig1, fig1_costs, "blue")
    state = GameState("v", F(1, 2), F(1, 2))
    with pytest.raises(ProtocolViolationError) as info:
        play_richman_game(fig1, honest, FixedAgent(F(3, 4), "m"), state, game_index=7)
    assert info.value.color == "red"
    assert info.value.game_index == 7
    assert "game 7" in str(info.value)
    with pytest.raises(ProtocolViolationError, match="negative"):
        play_richman_game(fig1, FixedAgent(F(-1, 8), "m"), honest, state)
    with pytest.raises(ProtocolViolationError, match="not an edge"):
        play_richman_game(fig1, FixedAgent(F(0), "r"), honest, state)


def test_zero_money_game_is_legal(fig1, fig1_costs):
    # Both broke: every bid is 0; the tiebreak decides everything.
    record = play_richman_game(
        fig1,
        make_agent("safety", fig1, fig1_costs, "blue"),
        make_agent("safety", fig1, fig1_costs, "red"),
        GameState("m", F(0), F(0)),
        tiebreak="always-blue",
    )
    assert record.outcome == "BlueWins"
    assert len(record.steps) == 1


def test_critical_standoff_hits_the_cap(fig1, optimal_pair):
    """With a split pot at v both sides bid 0 forever; the mover just laps
    the cycle, so the game ends only at the cap."""
    blue, red = optimal_pair
    for tiebreak, tie_value in (("always-blue", True), ("always-red", False)):
        record = play_richman_game(
            fig1, blue, red, GameState("v", F(1, 2), F(1, 2)), tiebreak=tiebreak
        )
        assert record.outcome == "Unresolved"
        assert record.move_cap == 384
        assert len(record.steps) == 384
        assert {s.tie for s in record.steps} == {tie_value}
        assert {s.move_to for s in record.steps} == {"v", "c", "a"}
        assert format_trace(record).splitlines()[-1] == (
            "outcome Unresolved(384) steps 384 cap 384"
        )
        corpus.check_money_conservation(record)


def test_fair_ties_use_the_derived_coin(fig1, optimal_pair):
    blue, red = optimal_pair
    state = GameState("v", F(1, 2), F(1, 2))
    record = play_richman_game(fig1, blue, red, state, tiebreak="fair", seed=11)
    twin = play_richman_game(fig1, blue, red, state, tiebreak="fair", seed=11)
    assert record == twin
    assert {s.tie for s in record.steps} == {True, False}


def test_max_moves_override(fig1, optimal_pair):
    blue, red = optimal_pair
    record = play_richman_game(
        fig1, blue, red, GameState("v", F(1, 2), F(1, 2)), max_moves=5
    )
    assert record.move_cap == 5
    assert len(record.steps) == 5
    assert record.outcome == "Unresolved"


def test_default_move_caps(fig1, path_graph, star):
    assert default_move_cap(fig1) == 384  # interior cycle: 64 * 6
    assert default_move_cap(path_graph) == 256  # interior cycle: 64 * 4
    assert default_move_cap(star) == 30  # acyclic interior: 10 * 3
    assert random_turn_move_cap(star, 1000) == 300
    assert random_turn_move_cap(star, 2) == 30


def test_batch_is_reproducible_and_additive(fig1, fig1_costs):
    blue = make_agent("safety", fig1, fig1_costs, "blue")
    red = make_agent("uniform-random-bid", fig1, fig1_costs, "red")
    state = GameState("v", F(7, 10), F(3, 10))
    first: list = []
    stats = run_batch(
        fig1, blue, red, state, runs=25, master_seed=6, on_record=first.append
    )
    again = run_batch(fig1, blue, red, state, runs=25, master_seed=6)
    assert stats == again
    assert stats.runs == 25
    assert stats.blue_wins + stats.red_wins + stats.unresolved == 25
    assert len(stats.move_counts) == 25
    assert sum(stats.histogram().values()) == 25
    # Game i is a pure function of (master_seed, i): replay one alone.
    solo = play_richman_game(fig1, blue, red, state, seed=6, game_index=10)
    assert solo == first[10]
    # Records generate lazily in order.
    lazy = list(batch_records(fig1, blue, red, state, runs=3, master_seed=6))
    assert lazy == first[:3]


def test_empty_batch(fig1, optimal_pair):
    blue, red = optimal_pair
    stats = run_batch(fig1, blue, red, GameState("v", F(1, 2), F(1, 2)), runs=0)
    assert stats.runs == 0
    assert stats.move_counts == ()
    assert stats.histogram() == {}
    payload = stats.to_json_dict()
    assert payload["move_histogram"] == {}
    json.dumps(payload)


def test_game_record_json_shape(star, star_costs):
    record = play_richman_game(
        star,
        make_agent("optimal", star, star_costs, "blue"),
        make_agent("optimal", star, star_costs, "red"),
        GameState("v", F(9, 10), F(1, 10)),
    )
    payload = record.to_json_dict()
    assert payload["start"] == "v"
    assert payload["outcome"] == "BlueWins"
    assert payload["move_cap"] == 30
    assert payload["steps"][0]["blue_bid"] == {"num": 7, "den": 10}
    assert payload["steps"][0]["tie"] is None
    json.dumps(payload)


def test_random_turn_game_basics(fig1, fig1_costs):
    sitting = play_random_turn_game(fig1, fig1_costs, "b")
    assert sitting.outcome == "BlueWins"
    assert sitting.steps == ()
    assert sitting.final_position == "b"
    assert play_random_turn_game(fig1, fig1_costs, "r").outcome == "RedWins"
    with pytest.raises(ValueError, match="unknown start"):
        play_random_turn_game(fig1, fig1_costs, "zz")

    record = play_random_turn_game(fig1, fig1_costs, "m", seed=4, game_index=9)
    assert record.move_cap == 384
    (step,) = record.steps
    assert (step.winner, step.move_to, record.outcome) == ("red", "r", "RedWins")
    assert step.tie is False
    assert step.blue_bid == 0 and step.transfer == 0
    twin = play_random_turn_game(fig1, fig1_costs, "m", seed=4, game_index=9)
    assert twin == record


def test_random_turn_moves_follow_the_coin(fig1, fig1_costs):
    for i in range(50):
        record = play_random_turn_game(fig1, fig1_costs, "m", seed=1, game_index=i)
        (step,) = record.steps
        if step.winner == "blue":
            assert step.move_to == "b" and step.tie is True
        else:
            assert step.move_to == "r" and step.tie is False
    outcomes = {
        play_random_turn_game(fig1, fig1_costs, "m", seed=1, game_index=i).outcome
        for i in range(50)
    }
    assert outcomes == {"BlueWins", "RedWins"}


def test_random_turn_stats_frozen(path_graph, path_costs):
    stats = random_turn_stats(path_graph, path_costs, "v1", 200, master_seed=3)
    assert (stats.blue_wins, stats.red_wins, stats.unresolved) == (147, 53, 0)
    assert stats.frequency == 53 / 200
    assert stats.stderr == pytest.approx(math.sqrt(0.265 * 0.735 / 200))
    assert json.dumps(stats.to_json_dict())
    with pytest.raises(ValueError, match="runs"):
        random_turn_stats(path_graph, path_costs, "v1", 0)


def test_estimate_from_a_terminal_is_exact(path_graph, path_costs):
    frequency, stderr = estimate_random_turn_value(path_graph, path_costs, "r", 50)
    assert frequency == 1.0
    assert stderr == 0.0
