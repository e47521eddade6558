import json

from discrete_hbl.cache import load_lattice
from discrete_hbl.groups import AbelianGroup
from discrete_hbl.subgroups import clear_lattice_cache, enumerate_subgroups


def test_round_trip(tmp_path):
    G = AbelianGroup.finite(2, 4)
    clear_lattice_cache()
    first = load_lattice(G, tmp_path)
    clear_lattice_cache()
    second = load_lattice(G, tmp_path)
    assert [H.key for H in first] == [H.key for H in second]
    clear_lattice_cache()
    assert [H.key for H in enumerate_subgroups(G)] == [H.key for H in first]


def test_stale_version_recomputes(tmp_path):
    G = AbelianGroup.finite(3, 3)
    load_lattice(G, tmp_path)
    (f,) = tmp_path.glob("lattice-*.json")
    data = json.loads(f.read_text())
    data["version"] = 0
    data["subgroups"] = [[0]]
    f.write_text(json.dumps(data))
    clear_lattice_cache()
    assert len(load_lattice(G, tmp_path)) == 6


def test_presentations_do_not_collide(tmp_path):
    a = load_lattice(AbelianGroup.finite(2, 3), tmp_path)
    b = load_lattice(AbelianGroup.finite(6), tmp_path)
    assert len(a) == len(b) == 4
    assert len(list(tmp_path.glob("lattice-*.json"))) == 2
