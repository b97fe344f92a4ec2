from conftest import SAMPLES
from stnac import parse_mastn, parse_stn
from stnac.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSolve:
    def test_two_var(self, capsys):
        code, out, _ = run_cli(capsys, "solve", str(SAMPLES / "two_var.stn"))
        assert code == 0
        assert out.splitlines() == ["x [0,8]", "y [2,10]"]

    def test_cycle_is_inconsistent(self, capsys):
        code, out, _ = run_cli(capsys, "solve", str(SAMPLES / "cycle3.stn"))
        assert code == 1
        assert out.strip() == "inconsistent"

    def test_solution_modes(self, capsys):
        for mode, values in (("lower", ["x = 0", "y = 2"]), ("upper", ["x = 8", "y = 10"])):
            code, out, _ = run_cli(
                capsys, "solve", str(SAMPLES / "two_var.stn"), "--solution", mode, "--verify"
            )
            assert code == 0
            lines = out.splitlines()
            assert lines[2:4] == values
            assert lines[-1] == "verify: pass"

    def test_sampled_solution(self, capsys):
        code, out, _ = run_cli(
            capsys, "solve", str(SAMPLES / "two_var.stn"), "--solution", "sample:3", "--verify"
        )
        assert code == 0
        assert out.splitlines()[-1] == "verify: pass"

    def test_missing_file(self, capsys):
        code, _, err = run_cli(capsys, "solve", "no_such_file.stn")
        assert code == 2
        assert "error" in err

    def test_bad_solution_mode(self, capsys):
        code, _, err = run_cli(
            capsys, "solve", str(SAMPLES / "two_var.stn"), "--solution", "median"
        )
        assert code == 2


class TestOracle:
    def test_agrees_with_solve_on_corpus(self, capsys):
        for sample in sorted(SAMPLES.glob("*.stn")):
            code_s, out_s, _ = run_cli(capsys, "solve", str(sample))
            code_o, out_o, _ = run_cli(capsys, "oracle", str(sample))
            assert code_s == code_o
            assert out_s == out_o

    def test_witness_on_stderr(self, capsys):
        code, out, err = run_cli(capsys, "oracle", str(SAMPLES / "cycle3.stn"))
        assert code == 1
        assert out.strip() == "inconsistent"
        assert "negative cycle" in err


class TestDsolve:
    def test_ring4(self, capsys, tmp_path):
        log_path = tmp_path / "run.log"
        code, out, _ = run_cli(
            capsys, "dsolve", str(SAMPLES / "ring4.mastn"),
            "--audit-privacy", "--log", str(log_path),
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[-1] == "privacy: pass"
        assert lines[0].startswith("0.arrive ")
        text = log_path.read_text()
        assert "DomainSync" in text and "ArcConsistent" in text

    def test_inconsistent_split_cycle(self, capsys, tmp_path):
        mastn = tmp_path / "bad.mastn"
        mastn.write_text(
            "mastn 2\n"
            "agent 0\ndomain 0 0 9\n"
            "agent 1\ndomain 0 0 9\n"
            "external 0 0 1 0 3 4\n"
            "external 1 0 0 0 3 4\n"
        )
        code, out, _ = run_cli(capsys, "dsolve", str(mastn))
        assert code == 1
        assert out.strip() == "inconsistent"

    def test_log_deterministic(self, capsys, tmp_path):
        logs = []
        for name in ("a.log", "b.log"):
            path = tmp_path / name
            code, _, _ = run_cli(
                capsys, "dsolve", str(SAMPLES / "interview.mastn"),
                "--sched-seed", "9", "--log", str(path),
            )
            assert code == 0
            logs.append(path.read_bytes())
        assert logs[0] == logs[1]

    def test_latency_flag(self, capsys):
        code, out, _ = run_cli(
            capsys, "dsolve", str(SAMPLES / "ring4.mastn"), "--latency", "4"
        )
        assert code == 0


class TestGen:
    def test_writes_parseable_stn(self, capsys, tmp_path):
        out_file = tmp_path / "g.stn"
        code, _, _ = run_cli(
            capsys, "gen", "random-stn", "--n", "12", "--density", "0.3",
            "--seed", "5", "-o", str(out_file),
        )
        assert code == 0
        text = out_file.read_text()
        assert text.startswith("# genspec: family=random-stn seed=5")
        assert parse_stn(text).n == 12

    def test_writes_parseable_mastn(self, capsys, tmp_path):
        out_file = tmp_path / "g.mastn"
        code, _, _ = run_cli(
            capsys, "gen", "factory-mastn", "--agents", "2", "--tasks", "4",
            "--seed", "1", "-o", str(out_file),
        )
        assert code == 0
        assert parse_mastn(out_file.read_text()).p == 2

    def test_stdout_default(self, capsys):
        code, out, _ = run_cli(capsys, "gen", "grid-stn", "--rows", "2", "--cols", "2")
        assert code == 0
        assert parse_stn(out).n == 4

    def test_env_seed(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("STNAC_SEED", "77")
        code, out, _ = run_cli(capsys, "gen", "grid-stn", "--rows", "2", "--cols", "2")
        assert code == 0
        assert "seed=77" in out.splitlines()[0]

    def test_bad_env_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("STNAC_SEED", "abc")
        code, _, err = run_cli(capsys, "gen", "grid-stn", "--rows", "2", "--cols", "2")
        assert code == 2
        assert "STNAC_SEED" in err

    def test_bad_params(self, capsys):
        code, _, err = run_cli(capsys, "gen", "scale-free-stn", "--n", "5", "--m", "9")
        assert code == 2


class TestBench:
    CONFIG = (
        "family = random-mastn\n"
        "sweep = agents\n"
        "values = 2,3\n"
        "seeds = 2\n"
        "activities = 2\n"
        "externals = 3\n"
    )

    def test_csv_to_file(self, capsys, tmp_path):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text(self.CONFIG)
        out_csv = tmp_path / "out.csv"
        code, _, _ = run_cli(capsys, "bench", str(cfg), "-o", str(out_csv))
        assert code == 0
        lines = out_csv.read_text().splitlines()
        assert lines[0].startswith("instance,n,e,agents,verdict")
        assert len(lines) == 5

    def test_byte_identical_reruns(self, capsys, tmp_path):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text(self.CONFIG)
        outputs = []
        for name in ("one.csv", "two.csv"):
            path = tmp_path / name
            assert run_cli(capsys, "bench", str(cfg), "-o", str(path))[0] == 0
            outputs.append(path.read_bytes())
        assert outputs[0] == outputs[1]

    def test_stdout_default(self, capsys, tmp_path):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text("family = grid-stn\nsweep = rows\nvalues = 2\ncols = 2\n")
        code, out, _ = run_cli(capsys, "bench", str(cfg))
        assert code == 0
        assert out.splitlines()[1].startswith('"grid-stn[rows=2,seed=0]"')

    def test_bad_config(self, capsys, tmp_path):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text("nonsense\n")
        code, _, err = run_cli(capsys, "bench", str(cfg))
        assert code == 2
