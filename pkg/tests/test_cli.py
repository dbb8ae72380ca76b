import csv
import io

import pytest

from algebra.field import GF512, element_hex
from cli import main
from model.bundle import load_bundle
from model.fixtures import DecoderCache
from model.mvf import mvf_validate
from model.messages import Query
from protocol.pir import bench, comm_cost, privacy_audit
from report.renderer import BENCH_COLUMNS, ReportRenderer


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# ----------------------------------------------------------------------------
# setup
# ----------------------------------------------------------------------------

def test_setup_toy(tmp_path, capsys):
    out_dir = tmp_path / "bundle"
    code, out, _ = run(
        capsys, "setup", "--m", 3, "--p", 2, "--k", 2, "--n", 2,
        "--out", out_dir, "--cache", tmp_path / "decoders.txt",
    )
    assert code == 0
    lines = out.splitlines()
    assert "t=2" in lines
    assert "S_M={0,1,3,4}" in lines
    assert "server 1: b = x [02]" in lines
    bundle = load_bundle(out_dir / "bundle.yaml")
    assert bundle.params.t == 2
    assert mvf_validate(bundle.params.family) is None
    assert bundle.load_database().n == 2
    assert (tmp_path / "decoders.txt").exists()


def test_setup_then_query(tmp_path, capsys):
    out_dir = tmp_path / "bundle"
    run(capsys, "setup", "--m", 3, "--p", 2, "--k", 2, "--n", 2, "--out", out_dir,
        "--cache", tmp_path / "decoders.txt", "--seed", 5)
    db = load_bundle(out_dir / "bundle.yaml").load_database()
    code, out, _ = run(capsys, "query", "--bundle", out_dir / "bundle.yaml", "--tau", 2, "--local")
    assert code == 0
    assert f"hex={element_hex(db.symbol(2))}" in out.splitlines()


def test_setup_rejects_shared_factor(tmp_path, capsys):
    code, _, err = run(capsys, "setup", "--m", 4, "--p", 2, "--out", tmp_path / "b")
    assert code == 2
    assert "gcd(m, p)" in err


def test_setup_grolmusz(tmp_path, capsys):
    code, out, _ = run(
        capsys, "setup", "--m", 3, "--p", 2, "--mvf", "grolmusz", "--h", 3,
        "--out", tmp_path / "b", "--cache", tmp_path / "decoders.txt",
    )
    assert code == 0
    assert "k=4" in out.splitlines()
    assert "n=3" in out.splitlines()


def test_setup_unusable_cache(tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    code, _, err = run(
        capsys, "setup", "--m", 3, "--p", 2, "--k", 2, "--n", 2,
        "--out", tmp_path / "b", "--cache", blocker / "decoders.txt",
    )
    assert code == 2
    assert err.startswith("error: cannot write decoder cache")
    assert not (tmp_path / "b").exists()


@pytest.mark.slow
def test_setup_three_servers(tmp_path, capsys, gf512_decoder):
    cache = tmp_path / "decoders.txt"
    DecoderCache(cache).store(gf512_decoder)
    code, out, _ = run(
        capsys, "setup", "--m", 511, "--p", 2, "--field", GF512.describe(),
        "--h", 7, "--weight", 1, "--out", tmp_path / "b", "--cache", cache,
    )
    assert code == 0
    lines = out.splitlines()
    assert {"t=3", "k=8", "n=7"} <= set(lines)


# ----------------------------------------------------------------------------
# query / audit / bench
# ----------------------------------------------------------------------------

def test_query_local(toy_bundle_path, capsys):
    code, out, _ = run(capsys, "query", "--bundle", toy_bundle_path, "--tau", 1, "--local")
    assert code == 0
    lines = out.splitlines()
    assert "value=1" in lines
    assert "hex=01" in lines
    assert "mode=local" in lines
    assert "measured: up=4 down=6 bytes=10 frame_bytes=70" in lines
    assert "cost_match=yes" in lines


def test_query_index_out_of_range(toy_bundle_path, capsys):
    code, _, err = run(capsys, "query", "--bundle", toy_bundle_path, "--tau", 3, "--local")
    assert code == 2
    assert err.startswith("error:")


def test_query_missing_bundle(tmp_path, capsys):
    code, _, err = run(capsys, "query", "--bundle", tmp_path / "none.yaml", "--tau", 1, "--local")
    assert code == 2
    assert "cannot read" in err


def test_query_unreachable_servers(toy_bundle_path, capsys):
    code, _, err = run(
        capsys, "query", "--bundle", toy_bundle_path, "--tau", 1,
        "--servers", "127.0.0.1:1,127.0.0.1:2", "--timeout", 1,
    )
    assert code == 1
    assert "127.0.0.1:1" in err


def test_audit_exact(toy_bundle_path, capsys):
    code, out, _ = run(capsys, "audit", "--bundle", toy_bundle_path, "--tau1", 1, "--tau2", 2)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "audit tau1=1 tau2=2 mode=exact betas=9"
    assert "server 0: identical uniform=yes first_difference=-" in lines
    assert lines[-1] == "verdict: identical"


def test_audit_over_budget(toy_bundle_path, capsys):
    code, _, err = run(capsys, "audit", "--bundle", toy_bundle_path, "--tau1", 1, "--tau2", 2, "--budget", 5)
    assert code == 2
    assert "--samples" in err


def test_audit_sampled(toy_bundle_path, capsys):
    code, out, _ = run(
        capsys, "audit", "--bundle", toy_bundle_path, "--tau1", 1, "--tau2", 2, "--samples", 500,
    )
    assert code == 0
    assert "mode=sampled" in out
    assert out.splitlines()[-1].startswith("verdict: statistical, not a proof")


def test_bench(toy_bundle_path, capsys):
    code, out, _ = run(capsys, "bench", "--bundle", toy_bundle_path, "--trials", 4)
    assert code == 0
    assert "formula: up=t*k=4 down=t*C(k+e-1, e-1)=6 (t=2 k=2 e=2)" in out
    assert "baseline e=1: down=2" in out
    assert out.splitlines()[-1] == "all_match=yes"


def test_bench_csv(toy_bundle_path, capsys):
    code, out, _ = run(capsys, "bench", "--bundle", toy_bundle_path, "--trials", 3, "--csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 3
    assert [row["tau"] for row in rows] == ["1", "2", "1"]
    assert all(row["down_elements"] == row["formula_down"] == "6" for row in rows)
    assert all(row["frame_bytes"] == "70" for row in rows)
    assert all(row["matches"] == "True" for row in rows)


# ----------------------------------------------------------------------------
# fixture tools
# ----------------------------------------------------------------------------

def test_search_decoder(capsys):
    code, out, _ = run(capsys, "search-decoder", "--m", 3, "--no-cache")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "m=3 t=2"
    assert "exponents=0,1" in lines
    assert lines[-1].startswith("fixture: m=3, field=")


def test_search_decoder_nothing_found(capsys):
    code, out, _ = run(capsys, "search-decoder", "--m", 3, "--tmax", 1, "--no-cache")
    assert code == 2
    assert "no S-decoding polynomial with at most 1 terms" in out


def test_validate_mvf(tmp_path, toy_bundle_path, capsys):
    code, out, _ = run(capsys, "validate-mvf", "--file", toy_bundle_path.parent / "family.mvf")
    assert code == 0
    assert out.splitlines()[-1] == "valid"

    bad = tmp_path / "bad.mvf"
    bad.write_text("6 2 2 S=0,1,3,4\n1 0 | 0 1\n0 1 | 0 1\n")
    code, out, _ = run(capsys, "validate-mvf", "--file", bad)
    assert code == 2
    assert out.splitlines()[-1].startswith("violation at (1, 2):")


def test_validate_mvf_unreadable_format(tmp_path, capsys):
    bad = tmp_path / "bad.mvf"
    bad.write_text("not a family\n")
    code, _, err = run(capsys, "validate-mvf", "--file", bad)
    assert code == 2
    assert err.startswith("error:")


def test_validate_mvf_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "validate-mvf", "--file", tmp_path / "none.mvf")
    assert code == 2
    assert err.startswith("error: cannot read")


def test_table(capsys):
    code, out, _ = run(capsys, "table", "--cmax", 3)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["c", "ours", "dvir_gopi", "efremenko"]
    assert [line.split()[0] for line in lines[1:]] == ["2", "3"]
    assert lines[1].split()[2] == "2"


def test_table_rejects_small_cmax(capsys):
    code, _, _ = run(capsys, "table", "--cmax", 1)
    assert code == 2


# ----------------------------------------------------------------------------
# Renderer
# ----------------------------------------------------------------------------

def test_render_setup_lists_servers(toy_params, tmp_path):
    text = ReportRenderer().render_setup(toy_params, comm_cost(toy_params), tmp_path / "bundle.yaml")
    lines = text.splitlines()
    assert "server 0: b = 1 [01]" in lines
    assert lines[-1] == "cost: up=4 elements (4 B), down=6 elements (6 B), total=10 B"


def test_render_bench_columns(toy_params, toy_db):
    rows = bench(toy_params, toy_db, 2)
    text = ReportRenderer().render_bench(rows, comm_cost(toy_params), csv=True)
    assert text.splitlines()[0] == ",".join(BENCH_COLUMNS)


def test_render_audit_difference(toy_params):
    def leaky(params, tau, beta):
        point = tuple(params.root.power(x) for x in params.family.v[tau - 1])
        return [Query(i, point) for i in range(params.t)]

    report = privacy_audit(toy_params, 1, 2, query_fn=leaky)
    text = ReportRenderer().render_audit(report)
    assert "server 0: different uniform=no" in text
    assert text.splitlines()[-1] == "verdict: different"
