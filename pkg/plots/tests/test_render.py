import hashlib
import json
from pathlib import Path

import pytest
from PIL import Image

from plots import CHECKSUM_KEY, PlotSpec, SchemaError, render, rows_checksum
from plots.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
FIG2 = FIXTURES / "fig2_svals.csv"
FERMION = FIXTURES / "fermion_svals.csv"


def test_fig2_fixture_checksum_embedded(tmp_path):
    out = tmp_path / "fig2.png"
    spec = PlotSpec(input_csvs=[str(FIG2)], output=str(out), top_k=4)
    assert render(spec) == str(out)
    embedded = Image.open(out).info[CHECKSUM_KEY]
    assert embedded == hashlib.sha256(FIG2.read_bytes()).hexdigest()


def test_fermion_fixture_renders_per_state_series(tmp_path):
    out = tmp_path / "fermion.png"
    spec = PlotSpec(input_csvs=[str(FERMION)], output=str(out), top_k=8)
    render(spec)
    assert Image.open(out).info[CHECKSUM_KEY] == rows_checksum([FERMION])


def test_multi_input_checksum_covers_all_files(tmp_path):
    out = tmp_path / "both.png"
    spec = PlotSpec(input_csvs=[str(FIG2), str(FERMION)], output=str(out), top_k=4)
    render(spec)
    expected = hashlib.sha256(FIG2.read_bytes() + FERMION.read_bytes()).hexdigest()
    assert Image.open(out).info[CHECKSUM_KEY] == expected


def test_missing_column_lists_columns(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("experiment,state,rotation,k,seed,sv_index\nfig2,s,none,8,0,0\n")
    spec = PlotSpec(input_csvs=[str(bad)], output=str(tmp_path / "x.png"))
    with pytest.raises(SchemaError) as err:
        render(spec)
    assert "sv_value" in str(err.value) and "sv_index" in str(err.value)


def test_empty_seed_group_is_schema_error(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("experiment,state,rotation,k,seed,sv_index,sv_value\n")
    spec = PlotSpec(input_csvs=[str(empty)], output=str(tmp_path / "x.png"))
    with pytest.raises(SchemaError, match="no data rows"):
        render(spec)


def test_unsupported_format_rejected(tmp_path):
    with pytest.raises(SchemaError, match="format"):
        PlotSpec(input_csvs=[str(FIG2)], output=str(tmp_path / "x.svg"), format="svg")


def test_spec_file_round_trip_and_unknown_keys(tmp_path):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(
        json.dumps(
            {"input_csvs": [str(FIG2)], "output": str(tmp_path / "o.png"), "top_k": 4}
        )
    )
    spec = PlotSpec.from_file(spec_path)
    assert spec.top_k == 4
    spec_path.write_text(json.dumps({"input_csvs": [], "output": "o.png", "nope": 1}))
    with pytest.raises(SchemaError, match="unknown spec keys"):
        PlotSpec.from_file(spec_path)


def test_cli_render_and_exit_codes(tmp_path, capsys):
    spec_path = tmp_path / "spec.json"
    out = tmp_path / "cli.png"
    spec_path.write_text(
        json.dumps({"input_csvs": [str(FIG2)], "output": str(out), "top_k": 4})
    )
    assert main(["render", "--spec", str(spec_path)]) == 0
    assert out.exists()
    spec_path.write_text(json.dumps({"input_csvs": ["/nonexistent.csv"], "output": str(out)}))
    assert main(["render", "--spec", str(spec_path)]) == 2
