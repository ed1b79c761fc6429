"""Configuration parsing, serialization round-trips, and the CLI surface."""

import math

import pytest

from chemolab.cli import main
from chemolab.errors import ConfigError
from chemolab.runconfig import (
    build_params,
    parse_run_config,
    parse_sweep_spec,
    resolve_monitors,
    serialize_run_config,
)

CART_CONFIG = """\
[model]
chi = 0.5
k = 1
n = 2
geometry = cartesian2d
Lx = 2
Ly = 2
nx = 16
ny = 16

[initial]
kind = gaussian
amplitude = 1.5
v0_base = 1
v0_min = 0.1

[scheme]
dt_safety = 0.4
dt_min = 1e-10
t_end = 0.5
blowup_factor = 1e6
output_interval = 0.1

[monitors]
q_list = 1, 2
pr_source = bootstrap
theta = 0.5
tolerance_rel = 0.05
"""

RADIAL_CONFIG = """\
[model]
chi = 0.5
k = 1
n = 3
geometry = radial
R = 1
m = 16

[scheme]
t_end = 0.4
output_interval = 0.1

[monitors]
pr_source = explicit
pr_pairs = 2.5:0.75
"""


class TestParsing:
    def test_cartesian_document(self):
        cfg = parse_run_config(CART_CONFIG)
        assert cfg.chi == 0.5 and cfg.k == 1.0 and cfg.n == 2
        assert cfg.geometry == "cartesian2d" and cfg.nx == 16
        assert cfg.kind == "gaussian" and cfg.amplitude == 1.5
        assert cfg.q_list == (1.0, 2.0)
        assert cfg.pr_source == "bootstrap"

    def test_radial_document_with_defaults(self):
        cfg = parse_run_config(RADIAL_CONFIG)
        assert cfg.geometry == "radial" and cfg.radius == 1.0 and cfg.shells == 16
        assert cfg.kind == "constant_cosine"  # [initial] omitted entirely
        assert cfg.dt_safety == 0.4 and cfg.blowup_factor == 1e6
        assert cfg.pr_pairs == ((2.5, 0.75),)

    def test_comments_and_blanks_ignored(self):
        text = "# leading comment\n; another\n\n" + CART_CONFIG
        assert parse_run_config(text) == parse_run_config(CART_CONFIG)

    def test_unknown_key_reports_line(self):
        text = CART_CONFIG.replace("ny = 16", "ny = 16\nnz = 4")
        with pytest.raises(ConfigError, match="line 10.*nz"):
            parse_run_config(text)

    def test_unknown_section_rejected(self):
        with pytest.raises(ConfigError, match=r"unknown section \[plotting\]"):
            parse_run_config(CART_CONFIG + "\n[plotting]\nstyle = fancy\n")

    def test_duplicate_key_reports_line(self):
        text = CART_CONFIG.replace("k = 1", "k = 1\nk = 2")
        with pytest.raises(ConfigError, match="line 4.*duplicate"):
            parse_run_config(text)

    def test_bad_number_reports_line(self):
        text = CART_CONFIG.replace("chi = 0.5", "chi = fast")
        with pytest.raises(ConfigError, match="line 2.*must be a number"):
            parse_run_config(text)

    def test_missing_required_key(self):
        text = CART_CONFIG.replace("t_end = 0.5\n", "")
        with pytest.raises(ConfigError, match="missing required key 't_end'"):
            parse_run_config(text)

    def test_missing_required_section(self):
        text = CART_CONFIG.replace("[scheme]", "[schema]")
        with pytest.raises(ConfigError):
            parse_run_config(text)

    def test_geometry_cross_checks(self):
        with pytest.raises(ConfigError, match="cartesian2d geometry requires n = 2"):
            parse_run_config(CART_CONFIG.replace("n = 2", "n = 3"))
        with pytest.raises(ConfigError, match="unknown key 'Lx'"):
            parse_run_config(RADIAL_CONFIG.replace("R = 1", "R = 1\nLx = 2"))

    def test_out_of_range_value_reports_line(self):
        with pytest.raises(ConfigError, match="line 8.*out of range"):
            parse_run_config(CART_CONFIG.replace("nx = 16", "nx = 2"))

    def test_pr_pairs_only_with_explicit_source(self):
        text = CART_CONFIG.replace("pr_source = bootstrap", "pr_source = bootstrap\npr_pairs = 2:0.5")
        with pytest.raises(ConfigError, match="pr_pairs"):
            parse_run_config(text)
        text2 = RADIAL_CONFIG.replace("pr_pairs = 2.5:0.75\n", "")
        with pytest.raises(ConfigError, match="explicit requires pr_pairs"):
            parse_run_config(text2)

    def test_entry_outside_section(self):
        with pytest.raises(ConfigError, match="line 1"):
            parse_run_config("chi = 0.5\n" + CART_CONFIG)


class TestRoundTrip:
    @pytest.mark.parametrize("text", [CART_CONFIG, RADIAL_CONFIG])
    def test_serialize_parse_identity(self, text):
        cfg = parse_run_config(text)
        assert parse_run_config(serialize_run_config(cfg)) == cfg

    def test_awkward_floats_survive(self):
        cfg = parse_run_config(CART_CONFIG.replace("chi = 0.5", "chi = 0.1234567890123456"))
        assert parse_run_config(serialize_run_config(cfg)) == cfg


class TestResolveMonitors:
    def test_bootstrap_pairs_for_2d(self):
        cfg = parse_run_config(CART_CONFIG)
        monitors = resolve_monitors(cfg, build_params(cfg))
        assert monitors.pr_pairs == ((2.5, 0.75),)
        assert monitors.v_orders == (1.75,)

    def test_above_threshold_raises_unless_tolerated(self):
        cfg = parse_run_config(CART_CONFIG.replace("chi = 0.5", "chi = 1.2"))
        with pytest.raises(ConfigError, match="chi < chi_star"):
            resolve_monitors(cfg, build_params(cfg))
        monitors = resolve_monitors(cfg, build_params(cfg), missing_ok=True)
        assert monitors.pr_pairs == ()

    def test_explicit_pairs_validated(self):
        bad = RADIAL_CONFIG.replace("pr_pairs = 2.5:0.75", "pr_pairs = 2.5:3.5")
        cfg = parse_run_config(bad)
        with pytest.raises(ConfigError, match="admissible window"):
            resolve_monitors(cfg, build_params(cfg))
        # p beyond p_max has no window at all; still a config error
        no_window = RADIAL_CONFIG.replace("pr_pairs = 2.5:0.75", "pr_pairs = 6.5:0.75")
        cfg2 = parse_run_config(no_window)
        with pytest.raises(ConfigError, match="no admissible window"):
            resolve_monitors(cfg2, build_params(cfg2))


SWEEP_TAIL = """\

[sweep]
chi_values = 0.4, 0.8
k_range = 1:2:0.5
parallelism = 2
"""


class TestSweepSpec:
    def test_values_and_range_axes(self):
        spec = parse_sweep_spec(CART_CONFIG + SWEEP_TAIL)
        assert spec.chi_values == (0.4, 0.8)
        assert spec.k_values == pytest.approx((1.0, 1.5, 2.0))
        assert spec.parallelism == 2
        assert spec.points[:3] == [(0.4, 1.0), (0.4, 1.5), (0.4, 2.0)]

    def test_missing_axis_falls_back_to_base_value(self):
        spec = parse_sweep_spec(CART_CONFIG + "\n[sweep]\nchi_values = 0.3, 0.6\n")
        assert spec.k_values == (1.0,)

    def test_empty_axis_rejected(self):
        with pytest.raises(ConfigError, match="empty sweep"):
            parse_sweep_spec(CART_CONFIG + "\n[sweep]\nchi_values =\n")

    def test_both_axis_forms_rejected(self):
        text = CART_CONFIG + "\n[sweep]\nchi_values = 0.4\nchi_range = 0.1:0.9:0.1\n"
        with pytest.raises(ConfigError, match="not both"):
            parse_sweep_spec(text)

    def test_point_cap(self):
        text = CART_CONFIG + "\n[sweep]\nchi_range = 0:1:0.01\nk_range = 0.1:10:0.1\nmax_points = 50\n"
        with pytest.raises(ConfigError, match="cap"):
            parse_sweep_spec(text)


class TestExponentsCli:
    def test_worked_chain(self, capsys, tmp_path):
        csv_path = tmp_path / "chain.csv"
        code = main(["exponents", "--chi", "0.4", "--k", "1", "--n", "6", "--csv", str(csv_path)])
        out = capsys.readouterr().out
        assert code == 0
        assert f"{math.sqrt(1.0 / 3.0):.17g}" in out  # chi_star(1, 6)
        assert "applicable" in out
        assert "terminated after 3 step(s)" in out
        rows = csv_path.read_text().strip().splitlines()
        assert rows[0] == "l,p,r,q,upper_used"
        ps = [float(r.split(",")[1]) for r in rows[1:]]
        assert ps == pytest.approx([1.5, 2.75, 4.5], abs=1e-12)

    def test_not_applicable_exit_code(self, capsys):
        code = main(["exponents", "--chi", "1.2", "--k", "1", "--n", "2"])
        assert code == 2
        assert "not applicable" in capsys.readouterr().out

    def test_low_k_high_chi_is_applicable(self, capsys):
        code = main(["exponents", "--chi", "0.9", "--k", "0.05", "--n", "4"])
        assert code == 0
        assert "is below the threshold" in capsys.readouterr().out

    def test_malformed_input_exit_one(self, capsys):
        assert main(["exponents", "--chi", "0.4", "--k", "-1", "--n", "6"]) == 1
        assert main(["exponents", "--chi", "abc", "--k", "1", "--n", "6"]) == 1
        assert main(["exponents"]) == 1


def write_config(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


STEADY_CONFIG = """\
[model]
chi = 0.5
k = 1
n = 2
geometry = cartesian2d
Lx = 1
Ly = 1
nx = 8
ny = 8

[initial]
kind = constant_cosine
amplitude = 0
v0_base = 1

[scheme]
t_end = 0.3
output_interval = 0.1

[monitors]
q_list = 2
pr_source = explicit
pr_pairs = 2:0.5
"""


class TestRunCli:
    def test_steady_state_run_exits_zero(self, tmp_path, capsys):
        # amplitude 0 means u = 0: E and D vanish, checks pass on flat zeros
        cfg = write_config(tmp_path, STEADY_CONFIG)
        code = main(["run", str(cfg), "--outdir", str(tmp_path / "out")])
        assert code == 0
        report = (tmp_path / "out" / "report.txt").read_text()
        assert "status: completed" in report
        assert "min_v_floor:" in report and "dissipation:" in report
        csv_text = (tmp_path / "out" / "timeseries.csv").read_text()
        lines = csv_text.splitlines()
        assert lines[0] == "t,mass,min_v,max_u,u_Lq_2,E_2_0.5,D_2_0.5,v_L1.5"
        # u = v = 1 is the exact steady state: every column after t is flat
        assert all(line.split(",")[1:] == lines[1].split(",")[1:] for line in lines[1:])

    def test_smooth_subthreshold_run_all_checks_pass(self, tmp_path):
        cfg = write_config(tmp_path, CART_CONFIG)
        code = main(["run", str(cfg), "--outdir", str(tmp_path / "out")])
        assert code == 0
        report = (tmp_path / "out" / "report.txt").read_text()
        assert "gronwall: pass" in report
        assert "dissipation: pass" in report
        assert "min_v_floor: pass" in report

    def test_zero_chi_heat_decay(self, tmp_path):
        text = CART_CONFIG.replace("chi = 0.5", "chi = 0").replace("q_list = 1, 2", "q_list = 1")
        cfg = write_config(tmp_path, text)
        code = main(["run", str(cfg), "--outdir", str(tmp_path / "out")])
        assert code == 0
        lines = (tmp_path / "out" / "timeseries.csv").read_text().strip().splitlines()
        cols = lines[0].split(",")
        max_u = [float(line.split(",")[cols.index("max_u")]) for line in lines[1:]]
        assert all(a >= b * (1.0 - 1e-13) for a, b in zip(max_u, max_u[1:]))
        mass = [float(line.split(",")[cols.index("mass")]) for line in lines[1:]]
        assert all(m == pytest.approx(mass[0], rel=1e-12) for m in mass)

    def test_radial_run_via_cli(self, tmp_path):
        text = RADIAL_CONFIG.replace("m = 16", "m = 16\n")
        cfg = write_config(tmp_path, text)
        code = main(["run", str(cfg), "--outdir", str(tmp_path / "out")])
        assert code == 0
        lines = (tmp_path / "out" / "timeseries.csv").read_text().splitlines()
        assert lines[0] == "t,mass,min_v,max_u,E_2.5_0.75,D_2.5_0.75,v_L1.75"
        assert len(lines) == 6  # t = 0.0 .. 0.4 by 0.1

    def test_repeated_runs_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path, CART_CONFIG)
        main(["run", str(cfg), "--outdir", str(tmp_path / "a")])
        main(["run", str(cfg), "--outdir", str(tmp_path / "b")])
        assert (tmp_path / "a" / "timeseries.csv").read_bytes() == (
            tmp_path / "b" / "timeseries.csv"
        ).read_bytes()

    def test_blowup_proxy_exit_code(self, tmp_path):
        text = """\
[model]
chi = 5
k = 0.05
n = 2
geometry = cartesian2d
Lx = 1
Ly = 1
nx = 16
ny = 16

[initial]
kind = gaussian
amplitude = 10
v0_base = 0.1

[scheme]
t_end = 5
output_interval = 0.5
blowup_factor = 1.5

[monitors]
# above the threshold no admissible pair exists; run with an empty set
pr_source = explicit
pr_pairs =
"""
        cfg = write_config(tmp_path, text)
        code = main(["run", str(cfg), "--outdir", str(tmp_path / "out")])
        assert code == 4
        assert "status: suspected_blowup" in (tmp_path / "out" / "report.txt").read_text()

    def test_dt_collapse_exit_code(self, tmp_path):
        cfg = write_config(tmp_path, CART_CONFIG.replace("dt_min = 1e-10", "dt_min = 1"))
        code = main(["run", str(cfg), "--outdir", str(tmp_path / "out")])
        assert code == 5

    def test_csv_header_is_a_function_of_monitors_only(self, tmp_path):
        # different dynamics, same [monitors] -> identical column sets
        cfg_a = write_config(tmp_path, CART_CONFIG, "a.cfg")
        cfg_b = write_config(tmp_path, CART_CONFIG.replace("amplitude = 1.5", "amplitude = 0.7"), "b.cfg")
        main(["run", str(cfg_a), "--outdir", str(tmp_path / "ha")])
        main(["run", str(cfg_b), "--outdir", str(tmp_path / "hb")])
        header_a = (tmp_path / "ha" / "timeseries.csv").read_text().splitlines()[0]
        header_b = (tmp_path / "hb" / "timeseries.csv").read_text().splitlines()[0]
        assert header_a == header_b

    def test_dissipation_skipped_with_too_few_rows(self, tmp_path):
        text = CART_CONFIG.replace("t_end = 0.5", "t_end = 0.1")  # 2 rows only
        cfg = write_config(tmp_path, text)
        code = main(["run", str(cfg), "--outdir", str(tmp_path / "out")])
        assert code == 0  # a skipped check is not a failed check
        assert "dissipation: skipped" in (tmp_path / "out" / "report.txt").read_text()

    def test_config_error_exit_code(self, tmp_path, capsys):
        cfg = write_config(tmp_path, CART_CONFIG.replace("chi = 0.5", "chi = oops"))
        code = main(["run", str(cfg), "--outdir", str(tmp_path / "out")])
        assert code == 1
        assert "line 2" in capsys.readouterr().err

    def test_bootstrap_monitors_above_threshold_is_config_error(self, tmp_path, capsys):
        cfg = write_config(tmp_path, CART_CONFIG.replace("chi = 0.5", "chi = 1.2"))
        assert main(["run", str(cfg), "--outdir", str(tmp_path / "out")]) == 1


SWEEP_SMALL = CART_CONFIG.replace("t_end = 0.5", "t_end = 0.2") + """\

[sweep]
chi_values = 0.6, 1.2
k_values = 0.5, 1
parallelism = 1
"""


class TestSweepCli:
    def test_summary_rows(self, tmp_path):
        spec = write_config(tmp_path, SWEEP_SMALL, "sweep.cfg")
        code = main(["sweep", str(spec), "--outdir", str(tmp_path / "out")])
        assert code == 0
        lines = (tmp_path / "out" / "sweep_summary.csv").read_text().strip().splitlines()
        assert lines[0] == "chi,k,chi_star,below_threshold,status,max_u_over_run,worst_gronwall_ratio"
        assert len(lines) == 5
        first = lines[1].split(",")
        assert float(first[0]) == 0.6 and float(first[1]) == 0.5
        assert first[3] == "true" and first[4] == "completed"
        # chi = 1.2 > chi_star(k, 2) = 1: above threshold, bootstrap pairs empty
        above = [ln.split(",") for ln in lines[1:] if ln.split(",")[0] == "1.2"]
        assert above and all(row[3] == "false" for row in above)
        assert all(row[6] == "nan" for row in above)

    def test_parallelism_levels_byte_identical(self, tmp_path, monkeypatch):
        spec = write_config(tmp_path, SWEEP_SMALL, "sweep.cfg")
        monkeypatch.setenv("CHEMOLAB_THREADS", "1")
        main(["sweep", str(spec), "--outdir", str(tmp_path / "p1")])
        monkeypatch.setenv("CHEMOLAB_THREADS", "4")
        main(["sweep", str(spec), "--outdir", str(tmp_path / "p4")])
        assert (tmp_path / "p1" / "sweep_summary.csv").read_bytes() == (
            tmp_path / "p4" / "sweep_summary.csv"
        ).read_bytes()

    def test_empty_sweep_exit_one(self, tmp_path, capsys):
        spec = write_config(tmp_path, CART_CONFIG + "\n[sweep]\nk_values =\n", "sweep.cfg")
        assert main(["sweep", str(spec)]) == 1
        assert "empty sweep" in capsys.readouterr().err

    def test_per_point_failures_recorded_in_row(self, tmp_path):
        # explicit pair (2.5, 0.75) is admissible at chi = 0.5 but not at
        # chi = 0.9 (p_max = 1/0.81 < 2.5): that point must fail in-row only
        text = CART_CONFIG.replace("t_end = 0.5", "t_end = 0.2").replace(
            "pr_source = bootstrap", "pr_source = explicit\npr_pairs = 2.5:0.75"
        )
        spec = write_config(tmp_path, text + "\n[sweep]\nchi_values = 0.5, 0.9\n", "sweep.cfg")
        assert main(["sweep", str(spec), "--outdir", str(tmp_path / "out")]) == 0
        lines = (tmp_path / "out" / "sweep_summary.csv").read_text().strip().splitlines()
        rows = {line.split(",")[0]: line.split(",") for line in lines[1:]}
        assert rows["0.5"][4] == "completed"
        assert rows["0.90000000000000002"][4] == "error:ConfigError"
        assert rows["0.90000000000000002"][6] == "nan"
