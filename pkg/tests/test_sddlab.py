import json

import pytest

import sddlab
from modules.report import read_csv


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"output_folder": str(tmp_path / "results"), "separation_from": 2,
                                "separation_to": 3}))
    return str(path)


def test_verify(config_file, capsys):
    assert sddlab.main(["--config", config_file, "verify", "--n", "2"]) == 0
    out = capsys.readouterr().out
    assert "verify n=2: all checks passed" in out
    assert "FAIL" not in out


def test_verify_over_cap_is_an_error(config_file, capsys):
    assert sddlab.main(["--config", config_file, "verify", "--n", "13"]) == 1
    assert "CapExceededError" in capsys.readouterr().err


def test_separation_uses_configured_range(config_file, tmp_path):
    assert sddlab.main(["--config", config_file, "separation", "--with-fixed"]) == 0
    rows = read_csv(str(tmp_path / "results" / "separation_2_3.csv"))
    assert sorted({row.n for row in rows}) == [2, 3]
    assert len(rows) == 8


def test_export_writes_sdd_and_dot(config_file, tmp_path):
    dot = tmp_path / "hwb.dot"
    assert sddlab.main(["--config", config_file, "export", "--object", "hwb-sdd:3", "--format", "sdd",
                        "--dot", str(dot)]) == 0
    text = (tmp_path / "results" / "hwb-sdd_3.sdd").read_text(encoding='utf-8')
    assert text.startswith("sdd ")
    assert dot.read_text(encoding='utf-8').startswith("digraph sdd")


def test_export_unknown_format_for_object(config_file, capsys):
    assert sddlab.main(["--config", config_file, "export", "--object", "vtree:hwb:3", "--format", "dot"]) == 1


def test_min_obdd(config_file, capsys):
    assert sddlab.main(["--config", config_file, "min-obdd", "--function", "exact:4:2", "--exhaustive"]) == 0
    out = capsys.readouterr().out
    assert "exact:4:2: 8 nodes, 48 arcs" in out
    assert "all orderings: 8 nodes" in out


def test_min_obdd_series(config_file, tmp_path, capsys):
    out = tmp_path / "series.csv"
    assert sddlab.main(["--config", config_file, "min-obdd", "--series", "4,6", "--out", str(out)]) == 0
    assert out.read_text(encoding='utf-8').startswith("n,nodes,arcs,ordering")


def test_compress_blowup(config_file, tmp_path):
    out = tmp_path / "blowup.csv"
    assert sddlab.main(["--config", config_file, "compress-blowup", "--from", "2", "--to", "3",
                        "--out", str(out)]) == 0
    lines = out.read_text(encoding='utf-8').splitlines()
    assert lines[0].startswith("n,arcs_before")
    assert len(lines) == 3


def test_subcommand_required(config_file):
    with pytest.raises(SystemExit):
        sddlab.main(["--config", config_file])
