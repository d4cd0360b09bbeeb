import json

from isotypic.cli import (
    decomposition_from_json,
    decomposition_to_json,
    run,
)
from isotypic.lr import tensor_multi
from isotypic.signatures import GroupFamily


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_tensor_table_json(capsys):
    code, out, _ = invoke(
        capsys, "tensor", "--group", "u", "--rank", "2", "--json", "1", "2", "2", "3"
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["group"] == {"family": "u", "rank": 2}
    assert obj["terms"] == [
        {"signature": [8], "mult": 1},
        {"signature": [7, 1], "mult": 3},
        {"signature": [6, 2], "mult": 5},
        {"signature": [5, 3], "mult": 5},
        {"signature": [4, 4], "mult": 2},
    ]


def test_tensor_stable_reports_k0(capsys):
    code, out, _ = invoke(capsys, "tensor", "--stable", "--json", "1", "2", "2", "3")
    assert code == 0
    obj = json.loads(out)
    assert obj["group"]["rank"] == "stable"
    assert obj["k0"] == 4
    assert len(obj["terms"]) == 14


def test_tensor_human_table(capsys):
    code, out, _ = invoke(capsys, "tensor", "--rank", "2", "1", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "group: u(2)"
    assert [line.split() for line in lines[1:]] == [["1", "2"], ["1", "1,1"]]


def test_branch_subcommand(capsys):
    code, out, _ = invoke(capsys, "branch", "--to", "so", "--rank", "5", "--json", "3")
    assert code == 0
    obj = json.loads(out)
    assert obj["terms"] == [
        {"signature": [3], "mult": 1},
        {"signature": [1], "mult": 1},
    ]
    code, out, _ = invoke(capsys, "branch", "--to", "sp", "--stable", "--json", "2,2")
    assert code == 0
    obj = json.loads(out)
    assert obj["k0"] == 6
    assert {tuple(t["signature"]): t["mult"] for t in obj["terms"]} == {
        (2, 2): 1, (1, 1): 1, (): 1,
    }


def test_dim_subcommand(capsys):
    code, out, _ = invoke(capsys, "dim", "--group", "so", "--rank", "3", "2")
    assert code == 0
    assert out.strip() == "5"


def test_reciprocity_subcommand(capsys):
    code, out, _ = invoke(capsys, "reciprocity", "--n", "1", "--k", "5", "--json", "3")
    assert code == 0
    obj = json.loads(out)
    assert obj["all_agree"] is True
    assert {tuple(r["mu"]) for r in obj["rows"]} == {(3,), (1,)}


def test_identity_mult_subcommand(capsys):
    code, out, _ = invoke(capsys, "identity-mult", "--mu", "2,1", "1", "1", "1")
    assert code == 0
    assert out.strip() == "2"


def test_fock_verify_subcommand(capsys):
    code, out, _ = invoke(capsys, "fock", "verify", "sp2n", "--n", "2", "--k", "5", "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["holds"] is True
    assert obj["relations_checked"] == 96


def test_fock_verify_human_output(capsys):
    code, out, _ = invoke(capsys, "fock", "verify", "sl2", "--k", "4")
    assert code == 0
    assert out.strip() == "sl2 (k=4): 3 relations hold"
    code, out, _ = invoke(
        capsys, "fock", "verify", "supq", "--p", "2", "--q", "1", "--k", "4"
    )
    assert code == 0
    assert "relations hold" in out


def test_fock_hwv_so_kinds(capsys):
    code, out, _ = invoke(
        capsys, "fock", "hwv", "--kind", "so_rank1", "--sig", "2", "--k", "3", "--json"
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["verified"] is True
    assert "2*i * Z[1][1] * Z[1][3]" in obj["polynomial"]
    code, out, _ = invoke(
        capsys, "fock", "hwv", "--kind", "so_general", "--sig", "2,1",
        "--n", "2", "--k", "5", "--json",
    )
    assert code == 0
    assert json.loads(out)["verified"] is True


def test_fock_hwv_subcommand(capsys):
    code, out, _ = invoke(
        capsys, "fock", "hwv", "--kind", "gl", "--sig", "2,1", "--n", "2", "--k", "2", "--json"
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["verified"] is True
    assert "Z[1][1]^2 * Z[2][2]" in obj["polynomial"]
    code, out, _ = invoke(
        capsys, "fock", "hwv", "--kind", "upq", "--sig", "2,0,0,-1",
        "--p", "1", "--q", "1", "--k", "4", "--json",
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["verified"] is True


def test_fock_pair_subcommand(capsys):
    code, out, _ = invoke(capsys, "fock", "pair", "Z[1][1]^2", "Z[1][1]^2")
    assert code == 0
    assert out.strip() == "2"
    code, out, _ = invoke(capsys, "fock", "pair", "Z[1][1]", "Z[1][2]")
    assert code == 0
    assert out.strip() == "0"


def test_domain_error_exit_code(capsys):
    code, out, err = invoke(capsys, "branch", "--to", "so", "--rank", "4", "2,2")
    assert code == 1
    assert out == ""
    assert err.startswith("OutsideStableRange")
    code, _, err = invoke(capsys, "tensor", "--rank", "1", "1,1")
    assert code == 1
    assert err.startswith("RankTooSmall")


def test_usage_error_exit_code(capsys):
    assert invoke(capsys, "no-such-command")[0] == 2
    assert invoke(capsys, "tensor", "1")[0] == 2  # neither --stable nor --rank
    assert invoke(capsys, "branch", "--to", "nowhere", "--rank", "5", "1")[0] == 2
    assert invoke(capsys, "dim", "--group", "u", "--rank", "2", "junk")[0] == 2
    code, _, err = invoke(capsys, "dim", "--group", "u", "--rank", "0", "1")
    assert code == 1 and err.startswith("RankConstraint")


def test_json_round_trip():
    dec = tensor_multi([(2,), (1, 1)], 3)
    obj = json.loads(json.dumps(decomposition_to_json(dec)))
    assert decomposition_from_json(obj) == dec
    stable_obj = decomposition_to_json(dec, k0=3)
    assert stable_obj["k0"] == 3


def test_byte_identical_outputs(capsys):
    first = invoke(capsys, "tensor", "--rank", "3", "--json", "2,1", "1")
    second = invoke(capsys, "tensor", "--rank", "3", "--json", "2,1", "1")
    assert first == second
    a = invoke(capsys, "fock", "hwv", "--kind", "gl", "--sig", "2,1",
               "--n", "2", "--k", "3", "--seed", "9", "--json")
    b = invoke(capsys, "fock", "hwv", "--kind", "gl", "--sig", "2,1",
               "--n", "2", "--k", "3", "--seed", "9", "--json")
    assert a == b


def test_cache_round_trip(tmp_path, capsys):
    cache = tmp_path / "cache.jsonl"
    args = ["tensor", "--rank", "2", "--json", "--cache", str(cache), "1", "2", "2", "3"]
    first = invoke(capsys, *args)
    assert first[0] == 0
    lines = cache.read_text().strip().splitlines()
    assert len(lines) == 1
    record = json.loads(lines[0])
    assert record["engine_version"]
    second = invoke(capsys, *args)
    assert second == first
    assert len(cache.read_text().strip().splitlines()) == 1


def test_cache_ignores_corruption_and_old_versions(tmp_path, capsys):
    cache = tmp_path / "cache.jsonl"
    cache.write_text("not json at all\n")
    args = ["dim", "--group", "u", "--rank", "2", "--cache", str(cache), "8"]
    code, out, err = invoke(capsys, *args)
    assert code == 0 and out.strip() == "9"
    assert "corrupt" in err
    lines = cache.read_text().strip().splitlines()
    assert len(lines) == 2
    # A version bump invalidates existing records.
    record = json.loads(lines[1])
    record["engine_version"] = "0.0.0"
    stale = dict(record)
    stale["result"] = {"dim": 12345, "group": record["result"]["group"],
                       "signature": record["result"]["signature"]}
    cache.write_text(json.dumps(stale) + "\n")
    code, out, _ = invoke(capsys, *args)
    assert code == 0 and out.strip() == "9"


def test_cache_does_not_change_output(tmp_path, capsys):
    with_cache = invoke(
        capsys, "branch", "--to", "so", "--rank", "5", "--json",
        "--cache", str(tmp_path / "c.jsonl"), "2,2",
    )
    without_cache = invoke(capsys, "branch", "--to", "so", "--rank", "5", "--json", "2,2")
    assert with_cache == without_cache


def test_env_var_cache(tmp_path, capsys, monkeypatch):
    cache = tmp_path / "env.jsonl"
    monkeypatch.setenv("ISOTYPIC_CACHE", str(cache))
    code, out, _ = invoke(capsys, "dim", "--group", "sp", "--rank", "4", "1,1")
    assert code == 0 and out.strip() == "5"
    assert cache.exists()


def test_group_family_json_shape():
    dec = tensor_multi([(1,)], 2)
    obj = decomposition_to_json(dec)
    assert obj == {
        "group": {"family": "u", "rank": 2},
        "terms": [{"signature": [1], "mult": 1}],
    }
    assert dec.group == GroupFamily("u", 2)
