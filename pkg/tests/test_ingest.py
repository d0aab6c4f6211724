import numpy as np
import pytest

from rang.generate import GenConfig, generate_ensemble
from rang.ingest import (
    FormatError,
    ValidationError,
    anonymize_check,
    load_dataset,
    save_dataset,
)
from rang.model import Edge, Group, GroupPartition, Network, NodeRecord

from conftest import make_org


def write(d, nodes="id,level\n1,1\n2,1\n3,2\n", edges="source,target,weight\n1,2,3\n3,1,1\n", groups=None):
    d.mkdir(parents=True, exist_ok=True)
    (d / "nodes.csv").write_text(nodes)
    (d / "edges.csv").write_text(edges)
    if groups is None:
        groups = '[{"gid": 0, "members": [1, 2], "leader": 3, "independent": false}]'
    (d / "groups.json").write_text(groups)
    return d


def test_smoke_fixture(tmp_path):
    net, part = load_dataset(write(tmp_path / "ds"))
    assert (len(net.nodes), len(net.edges)) == (3, 2)
    assert len(part) == 1
    assert part.groups[0].leader == 3


def test_fractional_weight_rejected_at_its_line(tmp_path):
    d = write(tmp_path / "ds", edges="source,target,weight\n1,2,3\n3,1,2.5\n")
    with pytest.raises(FormatError) as exc:
        load_dataset(d)
    assert exc.value.line == 3
    assert "edges.csv:3" in str(exc.value)


@pytest.mark.parametrize(
    "nodes",
    ["id,lvl\n1,1\n", "id,level\n1\n", "id,level\n1,x\n", "id,level\n1,1\n\n2,1\n", "id,level\n1,1,1\n"],
)
def test_malformed_node_rows(tmp_path, nodes):
    with pytest.raises(FormatError):
        load_dataset(write(tmp_path / "ds", nodes=nodes))


def test_missing_file(tmp_path):
    d = write(tmp_path / "ds")
    (d / "groups.json").unlink()
    with pytest.raises(FileNotFoundError):
        load_dataset(d)


def test_validation_failure(tmp_path):
    d = write(tmp_path / "ds", edges="source,target,weight\n1,1,3\n")
    with pytest.raises(ValidationError) as exc:
        load_dataset(d)
    assert exc.value.violations[0].rule == "self-loop"


def test_round_trip_is_byte_identical(tmp_path):
    net, part = make_org(seed=3)
    save_dataset(net, part, tmp_path / "a")
    net2, part2 = load_dataset(tmp_path / "a")
    assert net2 == net.canonical()
    assert part2.canonical() == part.canonical()
    save_dataset(net2, part2, tmp_path / "b")
    for name in ("nodes.csv", "edges.csv", "groups.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_empty_edge_list_writes_header_only(tmp_path):
    net = Network((NodeRecord(1), NodeRecord(2)), ())
    part = GroupPartition((Group(0, {1, 2}),))
    save_dataset(net, part, tmp_path / "e")
    assert (tmp_path / "e" / "edges.csv").read_text() == "source,target,weight\n"
    assert load_dataset(tmp_path / "e") == (net, part)


def test_generated_networks_round_trip(tmp_path):
    rng = np.random.default_rng(11)
    for k in range(100):
        net, part = make_org(seed=k, sizes=tuple(rng.integers(1, 7, size=rng.integers(1, 4))))
        model = ("bwrn", "wrg", "sbm")[k % 3]
        gen = generate_ensemble(net, GenConfig(model=model, seed=k, count=1), part).networks[0]
        d = tmp_path / str(k)
        save_dataset(gen, part, d)
        got_net, got_part = load_dataset(d)
        assert got_net == gen.canonical()
        assert got_part == part.canonical()


def test_anonymize_check():
    ok = Network((NodeRecord(1), NodeRecord(2), NodeRecord(3)), ())
    assert anonymize_check(ok) == []
    named = Network((NodeRecord(1), NodeRecord("john_smith")), ())
    assert anonymize_check(named) == ["non-numeric id 'john_smith'"]


def test_string_ids_load(tmp_path):
    d = write(
        tmp_path / "ds",
        nodes="id,level\nalice,1\n2,1\n",
        edges="source,target,weight\nalice,2,1\n",
        groups='[{"gid": 0, "members": ["alice", 2], "leader": null, "independent": false}]',
    )
    net, _ = load_dataset(d)
    assert anonymize_check(net) == ["non-numeric id 'alice'"]
    assert net.edges == (Edge("alice", 2, 1),)
