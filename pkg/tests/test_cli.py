import json

from schottky_strata.cli import run


def run_json(argv):
    code, envelope, text = run(argv)
    return code, envelope, text


class TestEnvelope:
    def test_tuples_payload(self):
        code, env, text = run_json(["tuples", "--g", "5", "--p", "5"])
        assert code == 0
        assert env["command"] == "tuples"
        assert env["results"]["count"] == 2
        assert env["results"]["tuples"][0] == {"g": 5, "p": 5, "t": 0, "r": 1, "s": 1}
        assert json.loads(text) == env

    def test_deterministic_output(self):
        _, _, first = run_json(["report", "--p", "5", "--g-min", "2", "--g-max", "8"])
        _, _, second = run_json(["report", "--p", "5", "--g-min", "2", "--g-max", "8"])
        assert first == second

    def test_meta_flag_adds_block(self):
        _, env, _ = run_json(["--meta", "count", "--g", "5", "--p", "5"])
        assert "timestamp" in env["meta"]
        _, env2, _ = run_json(["count", "--g", "5", "--p", "5"])
        assert "meta" not in env2

    def test_checks_nonempty_for_verification(self):
        _, env, _ = run_json(["verify", "example1"])
        assert env["checks"]


class TestExitCodes:
    def test_usage_error(self):
        code, env, _ = run_json(["tuples", "--g", "5"])
        assert code == 2 and env is None

    def test_unknown_command(self):
        code, _, _ = run_json(["frobnicate"])
        assert code == 2

    def test_domain_error(self):
        code, _, _ = run_json(["tuples", "--g", "5", "--p", "4"])
        assert code == 2

    def test_failed_check_exits_one(self):
        code, env, _ = run_json(
            ["loxcheck", "--g", "4", "--p", "5", "--t", "0", "--r", "2",
             "--s", "0", "--separation", "0.1"]
        )
        assert code == 1
        assert not env["checks"][0]["pass"]

    def test_success(self):
        assert run_json(["verify", "example1"])[0] == 0
        assert run_json(["verify", "example2"])[0] == 0


class TestCommands:
    def test_count_matches_tuples(self):
        for g, p in [(5, 5), (10, 5), (100, 11), (20, 2), (21, 3)]:
            _, env_c, _ = run_json(["count", "--g", str(g), "--p", str(p)])
            _, env_t, _ = run_json(["tuples", "--g", str(g), "--p", str(p)])
            assert env_c["results"]["count"] == env_t["results"]["count"]

    def test_m_with_oracle(self):
        code, env, _ = run_json(
            ["m", "--g", "5", "--p", "5", "--t", "0", "--r", "1", "--s", "1",
             "--oracle"]
        )
        assert code == 0
        assert env["results"] == {"m": 4, "oracle": 4}

    def test_oracle_with_bfs_and_scale(self):
        code, env, _ = run_json(
            ["oracle", "--p", "5", "--r", "1", "--s", "0", "--t", "1", "--scale"]
        )
        assert code == 0
        assert env["results"]["orbit_count"] == 1
        assert env["results"]["bfs_orbit_count"] == 1

    def test_bounds(self):
        _, env, _ = run_json(
            ["bounds", "--g", "136", "--p", "5", "--t", "12", "--r", "20",
             "--s", "0"]
        )
        assert env["results"]["components"]["basis"] == "example2_family"
        assert env["results"]["components"]["exact"] == 1

    def test_kernel_rank(self):
        code, env, _ = run_json(
            ["kernel", "--g", "26", "--p", "5", "--t", "6", "--r", "0", "--s", "0"]
        )
        assert code == 0
        assert env["results"]["rank"] == 26

    def test_kernel_custom_phi(self):
        code, env, _ = run_json(
            ["kernel", "--g", "5", "--p", "5", "--t", "1", "--r", "1", "--s", "0",
             "--phi", '{"a": [2], "e": [3]}']
        )
        assert code == 0
        assert env["results"]["rank"] == 5

    def test_build_matrices(self):
        code, env, _ = run_json(
            ["build", "--g", "2", "--p", "2", "--t", "0", "--r", "3", "--s", "0"]
        )
        assert code == 0
        rows = env["results"]["matrices"]
        assert [row["symbol"] for row in rows] == ["e1", "e2", "e3"]
        assert all(row["class"] == "elliptic" for row in rows)
        assert rows[1]["center"] == [10.0, 0.0]

    def test_csv_tuples(self):
        code, _, text = run_json(["tuples", "--g", "2", "--p", "2", "--csv"])
        assert code == 0
        assert text.splitlines() == [
            "g,p,t,r,s",
            "2,2,0,1,1",
            "2,2,0,3,0",
            "2,2,1,1,0",
        ]

    def test_csv_report(self):
        code, _, text = run_json(
            ["report", "--p", "2", "--g-min", "2", "--g-max", "3", "--csv"]
        )
        assert code == 0
        lines = text.splitlines()
        assert lines[0] == "g,p,t,r,s,m_count,dimension,exact,upper,basis"
        assert all(line.endswith("theorem_case_1") for line in lines[1:])

    def test_report_jobs_deterministic(self):
        _, seq, _ = run_json(["report", "--p", "3", "--g-min", "2", "--g-max", "10"])
        _, par, _ = run_json(
            ["report", "--p", "3", "--g-min", "2", "--g-max", "10", "--jobs", "2"]
        )
        assert seq["results"] == par["results"]
        assert seq["checks"] == par["checks"]

    def test_verify_example2_payload(self):
        code, env, _ = run_json(["verify", "example2"])
        assert code == 0
        assert env["results"]["witness"] == [[1, 1, 1, 1], [1, 1, 1, 2]]
        names = {c["name"] for c in env["checks"]}
        assert "genus_type_identity" in names
        assert "fixed_point_check" in names

    def test_verify_example2_user_curve(self):
        import random

        from schottky_strata.surfaces import random_curve

        curve = random_curve(5, 1, random.Random(5))
        code, env, _ = run_json(
            ["verify", "example2", "--curve", json.dumps(curve.to_json())]
        )
        assert code == 0
        assert env["results"]["curve_report"]["passed"]
        assert any(c["name"] == "user_curve_fixed_points" for c in env["checks"])

    def test_verify_deterministic(self):
        _, _, first = run_json(["verify", "example2"])
        _, _, second = run_json(["verify", "example2"])
        assert first == second
