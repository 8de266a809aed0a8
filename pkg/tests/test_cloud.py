import numpy as np
import pytest

import config
from cloud.generators import generate_irregular_cloud, generate_regular_cloud, pair_boundary_nodes
from cloud.models import Node, PointCloud, pairing_angle
from cloud.storage import load_cloud, save_cloud
from errors import CloudFormatError, CloudGeometryError, ConfigError


def _min_distance(cloud):
    coords = cloud.coordinates
    diff = coords[:, None, :] - coords[None, :, :]
    distances = np.hypot(diff[..., 0], diff[..., 1])
    np.fill_diagonal(distances, np.inf)
    return distances.min()


def test_smallest_grid():
    cloud = generate_regular_cloud(3, 3)
    assert cloud.size == 9
    assert list(cloud.inner_indices) == [4]
    assert cloud.coordinates[4] == pytest.approx([0.5, 0.5])
    assert len(cloud.boundary_indices) == 8
    assert all(cloud.paired[b] == 4 for b in cloud.boundary_indices)


@pytest.mark.parametrize("nx, ny", [(3, 3), (5, 5), (21, 21), (4, 7)])
def test_inner_count(nx, ny):
    cloud = generate_regular_cloud(nx, ny)
    assert cloud.size == nx * ny
    assert len(cloud.inner_indices) == (nx - 2) * (ny - 2)


def test_grid_spacing(grid21):
    assert grid21.size == 441
    assert _min_distance(grid21) == pytest.approx(0.05)


def test_normals_and_pairing(grid5):
    nodes = grid5.nodes
    assert nodes[2].normal == (0.0, -1.0)  # нижняя сторона
    assert nodes[10].normal == (-1.0, 0.0)  # левая сторона
    assert nodes[0].normal == pytest.approx((-2 ** -0.5, -2 ** -0.5))
    assert nodes[0].paired_inner == 6
    assert nodes[2].paired_inner == 7
    assert nodes[10].paired_inner == 11
    assert nodes[24].paired_inner == 18


@pytest.mark.parametrize("make", [
    lambda: generate_regular_cloud(21, 21),
    lambda: generate_irregular_cloud(21, 21, 0.3, seed=1),
    lambda: generate_irregular_cloud(9, 6, 0.45, seed=3),
])
def test_pairing_along_inward_normal(make):
    cloud = make()
    x_min, x_max, y_min, y_max = cloud.domain
    for b in cloud.boundary_indices:
        partner = cloud.paired[b]
        assert cloud.inner_mask[partner]
        px, py = cloud.coordinates[partner]
        assert x_min < px < x_max and y_min < py < y_max
        angle = pairing_angle(cloud.coordinates[b], cloud.normals[b], cloud.coordinates[partner])[0]
        if np.count_nonzero(cloud.normals[b]) == 1:
            assert angle <= config.PAIRING_ANGLE_TOLERANCE


def test_zero_area_domain():
    with pytest.raises(CloudGeometryError):
        generate_regular_cloud(5, 5, domain=(0.0, 0.0, 0.0, 1.0))


def test_grid_too_small():
    with pytest.raises(ConfigError):
        generate_regular_cloud(2, 5)


def test_zero_perturbation_matches_regular():
    assert generate_irregular_cloud(11, 11, 0.0, seed=5) == generate_regular_cloud(11, 11)


def test_irregular_is_deterministic():
    first = generate_irregular_cloud(21, 21, 0.3, seed=1)
    second = generate_irregular_cloud(21, 21, 0.3, seed=1)
    assert np.array_equal(first.coordinates, second.coordinates)
    assert first == second


def test_irregular_depends_on_seed():
    first = generate_irregular_cloud(21, 21, 0.3, seed=1)
    second = generate_irregular_cloud(21, 21, 0.3, seed=2)
    inner = first.inner_indices
    assert not np.array_equal(first.coordinates[inner], second.coordinates[inner])
    assert np.array_equal(first.coordinates[first.boundary_indices], second.coordinates[second.boundary_indices])


def test_irregular_offsets_bounded(irregular21):
    regular = generate_regular_cloud(21, 21)
    offsets = np.abs(irregular21.coordinates - regular.coordinates)
    assert offsets.max() <= 0.3 * 0.05 + 1e-15
    assert offsets.max() > 0


@pytest.mark.parametrize("perturbation", [-0.1, 0.5, 0.7])
def test_irregular_rejects_large_perturbation(perturbation):
    with pytest.raises(ConfigError):
        generate_irregular_cloud(11, 11, perturbation, seed=0)


def test_pair_boundary_nodes_prefers_angle_then_distance():
    coords = np.array([[0.0, 0.5], [0.3, 0.5], [0.1, 0.5], [0.1, 0.55]])
    inner_mask = np.array([False, True, True, True])
    normals = np.array([[-1.0, 0.0], [0, 0], [0, 0], [0, 0]])
    paired = pair_boundary_nodes(coords, inner_mask, normals)
    assert list(paired) == [2, -1, -1, -1]


@pytest.mark.parametrize("make", [
    lambda: generate_regular_cloud(7, 5),
    lambda: generate_irregular_cloud(21, 21, 0.3, seed=1),
])
def test_save_load_round_trip(tmp_path, make):
    cloud = make()
    path = tmp_path / "cloud.csv"
    save_cloud(cloud, path)
    loaded = load_cloud(path)
    assert loaded == cloud
    assert loaded.fingerprint() == cloud.fingerprint()


def test_saved_file_layout(tmp_path):
    path = tmp_path / "cloud.csv"
    save_cloud(generate_regular_cloud(3, 3), path)
    lines = path.read_text(encoding="utf-8").split("\n")
    assert lines[0] == "index,x,y,kind,nx,ny,pair"
    assert lines[5] == "4,0.5,0.5,I,,,"
    assert lines[1].startswith("0,0,0,B,")
    assert lines[1].endswith(",4")
    assert len(lines) == 11 and lines[-1] == ""


def _write(tmp_path, rows):
    path = tmp_path / "cloud.csv"
    path.write_text("index,x,y,kind,nx,ny,pair\n" + "\n".join(rows) + "\n", encoding="utf-8")
    return path


def _valid_rows():
    return [node_row for node_row in (",".join(node.to_row()) for node in generate_regular_cloud(3, 3).nodes)]


def test_boundary_without_normal(tmp_path):
    rows = _valid_rows()
    rows[1] = "1,0.5,0,B,,,4"
    with pytest.raises(CloudFormatError) as info:
        load_cloud(_write(tmp_path, rows))
    assert info.value.line == 3


def test_coincident_nodes(tmp_path):
    rows = _valid_rows()
    rows[5] = "5,0.5,0.5,I,,,"
    rows[3] = "3,0,0.5,B,-1,0,5"
    with pytest.raises(CloudFormatError):
        load_cloud(_write(tmp_path, rows))


def test_duplicate_index(tmp_path):
    rows = _valid_rows()
    rows[2] = rows[2].replace("2,", "1,", 1)
    with pytest.raises(CloudFormatError) as info:
        load_cloud(_write(tmp_path, rows))
    assert info.value.line == 4


def test_dangling_pair(tmp_path):
    rows = _valid_rows()
    rows[0] = rows[0].rsplit(",", 1)[0] + ",42"
    with pytest.raises(CloudFormatError) as info:
        load_cloud(_write(tmp_path, rows))
    assert info.value.line == 2


def test_malformed_number(tmp_path):
    rows = _valid_rows()
    rows[4] = "4,abc,0.5,I,,,"
    with pytest.raises(CloudFormatError) as info:
        load_cloud(_write(tmp_path, rows))
    assert info.value.line == 6


def test_node_from_row():
    node = Node.from_row(["7", "0.25", "1", "B", "0", "1", "3"])
    assert node.is_boundary()
    assert node.normal == (0.0, 1.0)
    assert node.paired_inner == 3
    assert Node.from_row(["2", "0.5", "0.5", "I", "", "", ""]).is_inner()


def test_validate_rejects_non_unit_normal():
    nodes = list(generate_regular_cloud(3, 3).nodes)
    nodes[1] = Node(index=1, x=0.5, y=0.0, kind=config.NODE_BOUNDARY, normal=(0.0, -2.0), paired_inner=4)
    with pytest.raises(CloudGeometryError):
        PointCloud(nodes=tuple(nodes)).validate()


def test_arrays_are_read_only(grid5):
    with pytest.raises(ValueError):
        grid5.coordinates[0, 0] = 1.0
