import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from roadgen.cli import main
from roadgen.export import from_json, validate_opendrive


def run_cli(*argv):
    return main([str(a) for a in argv])


def generate_into(tmp_path, name="run", size=5, budget=6, seed=7, mode="guided"):
    out = tmp_path / name
    code = run_cli(
        "generate", "--size", size, "--budget", budget,
        "--seed", seed, "--mode", mode, "--out", out,
    )
    assert code == 0
    return out


def scenario_files(directory):
    return sorted(directory.glob("scenario_*.json"))


# --------------------------------------------------------------------------
# generate
# --------------------------------------------------------------------------


def test_generate_writes_files_and_manifest(tmp_path):
    out = generate_into(tmp_path, size=5, budget=10, seed=7)
    assert len(scenario_files(out)) == 10
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["mode"] == "guided"
    assert manifest["seed"] == 7
    assert manifest["count_before_dedup"] == 10


def test_generate_is_reproducible_byte_for_byte(tmp_path):
    a = generate_into(tmp_path, name="a", budget=5, seed=3)
    b = generate_into(tmp_path, name="b", budget=5, seed=3)
    for fa, fb in zip(scenario_files(a), scenario_files(b)):
        assert fa.read_bytes() == fb.read_bytes()
    # manifests match except for wall-clock provenance
    ma = json.loads((a / "manifest.json").read_text())
    mb = json.loads((b / "manifest.json").read_text())
    for volatile in ("started_at", "finished_at"):
        ma.pop(volatile), mb.pop(volatile)
    assert ma == mb


def test_generated_sizes_respect_requested_size(tmp_path):
    out = generate_into(tmp_path, size=6, budget=8, seed=2)
    for path in scenario_files(out):
        scenario = from_json(path.read_text())
        assert scenario.size() <= 6


def test_generate_rejects_bad_flags(tmp_path):
    assert run_cli("generate", "--size", 5, "--out", tmp_path / "x") == 2  # no budget
    assert (
        run_cli("generate", "--size", 5, "--budget", "nonsense", "--out", tmp_path / "x") == 2
    )


# --------------------------------------------------------------------------
# dedup
# --------------------------------------------------------------------------


def test_dedup_removes_duplicates_and_reports_rate(tmp_path, capsys):
    out = generate_into(tmp_path, size=4, budget=30, seed=11)
    code = run_cli("dedup", "--in", out, "--out", tmp_path / "kept")
    assert code == 0
    report = json.loads((tmp_path / "kept" / "dedup_report.json").read_text())
    assert report["before"] == 30
    assert report["after"] == len(scenario_files(tmp_path / "kept"))
    assert report["after"] <= report["before"]
    assert report["uniqueness_rate"] == pytest.approx(report["after"] / report["before"])


def test_dedup_missing_directory_is_io_error(tmp_path):
    assert run_cli("dedup", "--in", tmp_path / "absent") == 1


def test_dedup_empty_directory_reports_na(tmp_path, capsys):
    empty = tmp_path / "empty"
    empty.mkdir()
    assert run_cli("dedup", "--in", empty, "--out", tmp_path / "kept") == 0
    assert "n/a" in capsys.readouterr().out


def test_dedup_threshold_default_matches_explicit(tmp_path):
    out = generate_into(tmp_path, size=4, budget=15, seed=5)
    assert run_cli("dedup", "--in", out, "--out", tmp_path / "d1") == 0
    assert run_cli("dedup", "--in", out, "--threshold", 1.0, "--out", tmp_path / "d2") == 0
    names1 = [p.name for p in scenario_files(tmp_path / "d1")]
    names2 = [p.name for p in scenario_files(tmp_path / "d2")]
    assert names1 == names2


def test_dedup_copies_are_byte_identical(tmp_path):
    out = generate_into(tmp_path, size=4, budget=10, seed=8)
    assert run_cli("dedup", "--in", out, "--out", tmp_path / "kept") == 0
    for kept in scenario_files(tmp_path / "kept"):
        assert kept.read_bytes() == (out / kept.name).read_bytes()


# --------------------------------------------------------------------------
# export
# --------------------------------------------------------------------------


def test_export_svg_one_file_per_scenario(tmp_path):
    out = generate_into(tmp_path, budget=3, seed=4)
    assert run_cli("export", "--in", out, "--format", "svg", "--out", tmp_path / "svg") == 0
    svgs = sorted((tmp_path / "svg").glob("*.svg"))
    assert len(svgs) == 3
    for path in svgs:
        ET.fromstring(path.read_text())  # well-formed XML


def test_export_xodr_passes_subset_validator(tmp_path):
    out = generate_into(tmp_path, budget=4, seed=6)
    assert run_cli("export", "--in", out, "--format", "xodr", "--out", tmp_path / "x") == 0
    xodrs = sorted((tmp_path / "x").glob("*.xodr"))
    assert len(xodrs) == 4
    for path in xodrs:
        assert validate_opendrive(path.read_text()) == []


def test_export_json_round_trips(tmp_path):
    out = generate_into(tmp_path, budget=3, seed=9)
    assert run_cli("export", "--in", out, "--format", "json", "--out", tmp_path / "j") == 0
    for src in scenario_files(out):
        copy = tmp_path / "j" / src.name
        assert copy.read_bytes() == src.read_bytes()  # canonical form is stable


def test_export_unknown_format_is_usage_error(tmp_path):
    out = generate_into(tmp_path, budget=2, seed=1)
    assert run_cli("export", "--in", out, "--format", "step") == 2


def test_export_missing_directory_is_io_error(tmp_path):
    assert run_cli("export", "--in", tmp_path / "absent", "--format", "svg") == 1


# --------------------------------------------------------------------------
# stats
# --------------------------------------------------------------------------


def test_stats_reports_uniqueness_and_histogram(tmp_path, capsys):
    out = generate_into(tmp_path, size=4, budget=12, seed=13)
    assert run_cli("stats", out) == 0
    printed = capsys.readouterr().out
    assert "uniqueness rate:" in printed
    assert "kind histogram:" in printed


def test_stats_histogram_sums_to_scenario_size(tmp_path):
    out = generate_into(tmp_path, size=5, budget=1, seed=21)
    scenario = from_json(scenario_files(out)[0].read_text())
    import io
    from contextlib import redirect_stdout

    buf = io.StringIO()
    with redirect_stdout(buf):
        assert run_cli("stats", out, "--json") == 0
    stats = json.loads(buf.getvalue())[0]
    assert sum(stats["kind_histogram"].values()) == scenario.size()
    assert stats["placed_components"] == scenario.size()


def test_stats_compares_two_runs(tmp_path, capsys):
    guided = generate_into(tmp_path, name="g", size=4, budget=10, seed=3, mode="guided")
    random_run = generate_into(tmp_path, name="r", size=4, budget=10, seed=3, mode="random")
    assert run_cli("stats", guided, random_run) == 0
    printed = capsys.readouterr().out
    assert "comparison:" in printed


def test_stats_requires_manifest(tmp_path):
    bare = tmp_path / "bare"
    bare.mkdir()
    assert run_cli("stats", bare) == 1


# --------------------------------------------------------------------------
# catalog + pipeline
# --------------------------------------------------------------------------


def test_catalog_list_prints_all_templates(tmp_path, capsys):
    assert run_cli("catalog", "list") == 0
    printed = capsys.readouterr().out
    assert "total: 242 templates" in printed


def test_full_pipeline_composes(tmp_path):
    out = generate_into(tmp_path, size=5, budget=6, seed=19)
    assert run_cli("dedup", "--in", out, "--out", tmp_path / "kept") == 0
    assert run_cli("export", "--in", tmp_path / "kept", "--format", "xodr",
                   "--out", tmp_path / "maps") == 0
    assert run_cli("export", "--in", tmp_path / "kept", "--format", "svg",
                   "--out", tmp_path / "img") == 0
    kept = len(scenario_files(tmp_path / "kept"))
    assert len(list((tmp_path / "maps").glob("*.xodr"))) == kept
    assert len(list((tmp_path / "img").glob("*.svg"))) == kept


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "roadgen.cli", "--version"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "roadgen" in proc.stdout
