import pytest

from modules.report import CSV_COLUMNS, Construction, SizeReport, read_csv, to_frame, write_csv


def _row(n=3, construction=Construction.SDD_FN, nodes=10, arcs=30):
    return SizeReport("ghwb", n, construction, nodes, arcs, 1.5, "sigma=1 2 3;rho=4 5 6 7")


def test_duplicate_keys_rejected():
    with pytest.raises(ValueError):
        to_frame([_row(), _row(nodes=11)])
    assert len(to_frame([_row(), _row(construction=Construction.OBDD_MIN)])) == 2


def test_negative_sizes_rejected():
    with pytest.raises(ValueError):
        _row(nodes=-1)
    with pytest.raises(ValueError):
        _row(arcs=-6)


def test_construction_coerced_from_text():
    assert _row(construction="OBDD_FIXED").construction is Construction.OBDD_FIXED
    with pytest.raises(ValueError):
        _row(construction="BDD")


def test_csv_layout(tmp_path):
    path = write_csv([_row(2), _row(3)], str(tmp_path / "rows.csv"))
    with open(path, 'rb') as f:
        data = f.read()
    assert b"\r\n" not in data
    lines = data.decode('utf-8').splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[1] == "ghwb,2,SDD_FN,10,30,1.5,sigma=1 2 3;rho=4 5 6 7"


def test_read_back(tmp_path):
    rows = [_row(2), _row(2, Construction.OBDD_MIN, 4, 24)]
    assert read_csv(write_csv(rows, str(tmp_path / "nested" / "rows.csv"))) == rows
