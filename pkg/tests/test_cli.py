"""CLI smoke: board files, play/replay round trips, batches, verify."""

import json

from percduel.cli import main


def test_sample_board_and_reload(tmp_path, capsys):
    out = tmp_path / "board.txt"
    rc = main(["sample-board", "--window=-10,-10,10,10", "--p", "0.5",
               "--seed", "3", "--out", str(out)])
    assert rc == 0
    text = out.read_text()
    assert text.startswith("BOARD v1 window=-10,-10,10,10")
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("CONFIG ")


def test_play_then_replay_round_trip(tmp_path, capsys):
    out = tmp_path / "game.txt"
    rc = main([
        "play", "--variant", "limited", "--m", "1", "--b", "2",
        "--breaker", "strategy4", "--maker", "random:9",
        "--round-limit", "60", "--out", str(out)])
    assert rc == 0
    played = capsys.readouterr().out
    assert "OUTCOME breaker_won" in played
    rc = main(["replay", "--transcript", str(out)])
    assert rc == 0
    replayed = capsys.readouterr().out
    assert "OUTCOME breaker_won" in replayed
    assert "STATE_HASH" in replayed


def test_play_polluted_with_board_file(tmp_path, capsys):
    board = tmp_path / "board.txt"
    main(["sample-board", "--window=-15,-15,15,15", "--p", "0.52",
          "--seed", "11", "--out", str(board)])
    capsys.readouterr()
    out = tmp_path / "game.txt"
    rc = main([
        "play", "--variant", "unlimited", "--m", "1", "--b", "1",
        "--breaker", "strategy5", "--maker", "random:4",
        "--board", str(board), "--out", str(out), "--status-every", "16"])
    assert rc == 0
    assert "OUTCOME breaker_won" in capsys.readouterr().out
    rc = main(["replay", "--transcript", str(out)])
    assert rc == 0


def test_batch_summary(tmp_path, capsys):
    out = tmp_path / "summary.json"
    rc = main([
        "batch", "--variant", "box_limited", "--m", "29", "--b", "58",
        "--breaker", "strategy3", "--maker", "greedy:5", "--games", "8",
        "--round-limit", "4", "--no-record", "--out", str(out)])
    assert rc == 0
    summary = json.loads(out.read_text())
    assert summary["games"] == 8
    assert summary["breaker_win_rate"] == 1.0
    assert summary["forfeits"] == 0
    assert "SUMMARY" in capsys.readouterr().out


def test_verify_lemma_subcommand(capsys):
    rc = main(["verify", "--lemma", "perimetric", "--max-edges", "5"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "PASS perimetric" in out
    report = json.loads(
        [ln for ln in out.splitlines() if ln.startswith("REPORT ")][0][7:])
    assert report["passed"] and report["details"]["checked"] == 490


def test_verify_strategy_subcommand(capsys):
    rc = main(["verify", "--strategy", "strategy4", "--m", "2", "--c", "1",
               "--games", "20", "--maker", "random:7"])
    assert rc == 0
    assert "PASS strategy4" in capsys.readouterr().out
