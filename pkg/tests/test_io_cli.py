import json
import re

import pytest

from htg import cli
from htg.errors import ParseError, UnknownCanonicalGrid
from htg.generate import generate_named, paper2d, random_grid, uniform_grid
from htg.grid import grid_stats
from htg.io import load_grid, mesh_to_obj, parse_grid, serialize_grid, serialize_mesh
from htg.selection import SelectionRequest, extract_selected_ids
from htg.surface import extract_surface_2d, extract_surface_3d

from gridgen import corpus_2d


# -- grid file round-trip -----------------------------------------------------------


def test_round_trip_preserves_everything():
    for grid in corpus_2d(6):
        text = serialize_grid(grid)
        back = parse_grid(text)
        assert serialize_grid(back) == text
        assert grid_stats(back) == grid_stats(grid)
        assert serialize_mesh(extract_surface_2d(back)) == serialize_mesh(
            extract_surface_2d(grid)
        )


def test_round_trip_3d_with_mask():
    grid = random_grid(3, 2, max_depth=2, seed=4, mask_density=0.3, irregular_axes=True)
    back = parse_grid(serialize_grid(grid))
    assert serialize_mesh(extract_surface_3d(back)) == serialize_mesh(
        extract_surface_3d(grid)
    )


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(version=99),
        lambda d: d.pop("trees"),
        lambda d: d.update(trees=["1 0x00 0"]),
        lambda d: d.update(dimension=4),
    ],
)
def test_parse_rejects_malformed_documents(mutate):
    doc = json.loads(serialize_grid(uniform_grid(2, 2, 1)))
    mutate(doc)
    with pytest.raises(Exception) as err:
        parse_grid(json.dumps(doc))
    assert err.type is ParseError or issubclass(err.type, Exception)


def test_parse_rejects_non_json():
    with pytest.raises(ParseError):
        parse_grid("not a grid {")


def test_descriptor_whitespace_ignored(tmp_path):
    grid = uniform_grid(2, 2, 1)
    doc = json.loads(serialize_grid(grid))
    doc["trees"] = ["1 00\n 00"]
    assert parse_grid(json.dumps(doc)).total_cells == 5


# -- OBJ export ------------------------------------------------------------------


def test_obj_poly_counts():
    obj = mesh_to_obj(extract_surface_2d(uniform_grid(2, 2, 1)))
    lines = obj.strip().splitlines()
    assert sum(1 for l in lines if l.startswith("v ")) == 16
    assert sum(1 for l in lines if l.startswith("f ")) == 4
    assert all(l.startswith(("v ", "f ")) for l in lines)


def test_obj_hexahedra_expand_to_faces():
    grid = uniform_grid(3, 2, 0)
    out = extract_selected_ids(grid, SelectionRequest.by_ids([0]))
    obj = mesh_to_obj(out)
    faces = [l for l in obj.splitlines() if l.startswith("f ")]
    assert len(faces) == 6
    verts = [l for l in obj.splitlines() if l.startswith("v ")]
    assert len(verts) == 8


def test_obj_indices_are_one_based():
    obj = mesh_to_obj(extract_surface_2d(uniform_grid(2, 2, 0)))
    face = next(l for l in obj.splitlines() if l.startswith("f "))
    assert face == "f 1 2 3 4"


# -- CLI ----------------------------------------------------------------------------


def run_cli(capsys, *args):
    code = cli.main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def summary(stdout):
    m = re.search(r"^(\S+) in=(\d+) out=(\d+) ms=([0-9.]+)$", stdout.strip().splitlines()[-1])
    assert m, stdout
    return m.group(1), int(m.group(2)), int(m.group(3)), float(m.group(4))


def test_gen_single_cell(tmp_path, capsys):
    path = tmp_path / "g.json"
    code, out, _ = run_cli(capsys, "gen", "uniform(2,2,0)", "--out", str(path))
    assert code == 0
    assert summary(out)[2] == 1
    assert load_grid(path).total_cells == 1


def test_gen_uniform_3d(tmp_path, capsys):
    path = tmp_path / "g.json"
    code, out, _ = run_cli(capsys, "gen", "uniform(3,3,1)", "--out", str(path))
    assert code == 0 and summary(out)[2] == 28


def test_gen_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run_cli(capsys, "gen", "paper2d", "--seed", "42", "--mask-density", "0.2",
                       "--out", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_paper2d_leaf_count_matches_descriptor_scan(tmp_path, capsys):
    path = tmp_path / "p.json"
    run_cli(capsys, "gen", "paper2d", "--seed", "42", "--out", str(path))
    doc = json.loads(path.read_text())
    expected_leaves = sum(t.count("0") for t in doc["trees"])
    code, out, _ = run_cli(capsys, "stats", str(path))
    stats_doc = json.loads(out.strip().splitlines()[0])
    assert stats_doc["leaf_count"] == expected_leaves


def test_stats_summary_line(tmp_path, capsys):
    path = tmp_path / "g.json"
    run_cli(capsys, "gen", "uniform(2,2,2)", "--out", str(path))
    code, out, _ = run_cli(capsys, "stats", str(path))
    assert code == 0
    assert summary(out) [:3] == ("stats", 21, 16)


def test_surface_3d_counts(tmp_path, capsys):
    path = tmp_path / "g.json"
    run_cli(capsys, "gen", "uniform(3,3,1)", "--out", str(path))
    mesh_path = tmp_path / "m.json"
    code, out, _ = run_cli(capsys, "surface", str(path), "--out", str(mesh_path))
    assert code == 0
    cmd, cells_in, cells_out, _ = summary(out)
    assert (cmd, cells_in, cells_out) == ("surface", 28, 54)
    doc = json.loads(mesh_path.read_text())
    assert len(doc["quads"]) == 54  # summary count equals the file contents


def test_adaptive_full_view_equals_surface(tmp_path, capsys):
    path = tmp_path / "g.json"
    run_cli(capsys, "gen", "paper2d", "--out", str(path))
    _, out_full, _ = run_cli(capsys, "surface", str(path))
    grid = load_grid(path)
    lo, hi = grid.spec.bounds
    camera = f"512,{int(512 * (hi[1] - lo[1]) / (hi[0] - lo[0])) + 1},1,0.0001,{(lo[0]+hi[0])/2},{(lo[1]+hi[1])/2}"
    code, out_adaptive, _ = run_cli(capsys, "adaptive", str(path), "--camera", camera)
    assert code == 0
    assert summary(out_adaptive)[2] == summary(out_full)[2]


def test_adaptive_cli_threshold_sweep_matches_oracle(tmp_path, capsys):
    from htg.adaptive import Camera2D, depth_cap, view_rect
    from oracles import GridIndex, adaptive_quads_2d

    path = tmp_path / "p.json"
    run_cli(capsys, "gen", "paper2d", "--out", str(path))
    grid = load_grid(path)
    gidx = GridIndex(grid)
    counts = []
    for s in (1, 4, 16, 64):
        code, out, _ = run_cli(
            capsys, "adaptive", str(path), "--camera", f"512,768,1,{s},1,1.5"
        )
        assert code == 0
        counts.append(summary(out)[2])
        camera = Camera2D(512, 768, (1.0, 1.5), 1.0, s)
        rect = view_rect(camera, grid)
        expected = adaptive_quads_2d(gidx, (rect.min, rect.max), depth_cap(camera, 2))
        assert counts[-1] == len(expected)
    assert counts == sorted(counts, reverse=True) and counts[0] > counts[-1]


def test_select_and_elevate_outputs(tmp_path, capsys):
    path = tmp_path / "g.json"
    run_cli(capsys, "gen", "uniform(2,2,1)", "--out", str(path))
    code, out, _ = run_cli(capsys, "select-ids", str(path), "--ids", "0")
    assert code == 0 and summary(out)[2] == 1
    code, out, _ = run_cli(
        capsys, "select-locations", str(path), "--points", "0.25,0.25;0.75,0.75"
    )
    assert code == 0 and summary(out)[2] == 2
    obj_path = tmp_path / "m.obj"
    code, out, _ = run_cli(
        capsys, "elevate", str(path), "--height-scale", "2", "--out", str(obj_path),
        "--format", "obj",
    )
    assert code == 0
    assert "v " in obj_path.read_text()


def test_selection_request_from_text_documents(tmp_path, capsys):
    path = tmp_path / "g.json"
    run_cli(capsys, "gen", "uniform(2,2,1)", "--out", str(path))
    ids_doc = tmp_path / "ids.txt"
    ids_doc.write_text("1\n3\n")
    code, out, _ = run_cli(capsys, "select-ids", str(path), "--ids-file", str(ids_doc))
    assert code == 0 and summary(out)[2] == 2
    points_doc = tmp_path / "points.txt"
    points_doc.write_text("0.25,0.25\n0.75,0.75\n")
    code, out, _ = run_cli(
        capsys, "select-locations", str(path), "--points-file", str(points_doc)
    )
    assert code == 0 and summary(out)[2] == 2


def test_preserve_topology_written_as_mask(tmp_path, capsys):
    path = tmp_path / "g.json"
    run_cli(capsys, "gen", "uniform(2,2,1)", "--out", str(path))
    out_path = tmp_path / "sel.json"
    code, out, _ = run_cli(
        capsys, "select-ids", str(path), "--ids", "2,3", "--preserve-topology",
        "--out", str(out_path),
    )
    assert code == 0 and summary(out)[2] == 2
    doc = json.loads(out_path.read_text())
    assert doc["kind"] == "selection_mask"
    assert doc["bits"] == "00110"


def test_repeated_runs_byte_identical(tmp_path, capsys):
    path = tmp_path / "g.json"
    run_cli(capsys, "gen", "paper2d", "--mask-density", "0.15", "--out", str(path))
    outs = []
    for name in ("m1.json", "m2.json"):
        mesh_path = tmp_path / name
        run_cli(capsys, "surface", str(path), "--out", str(mesh_path))
        outs.append(mesh_path.read_bytes())
    assert outs[0] == outs[1]


# -- exit codes -----------------------------------------------------------------------


def test_exit_code_unknown_generator(tmp_path, capsys):
    code, _, err = run_cli(capsys, "gen", "nope", "--out", str(tmp_path / "x.json"))
    assert code == 3 and "nope" in err


def test_exit_code_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    assert run_cli(capsys, "stats", str(bad))[0] == 2


def test_exit_code_missing_file(tmp_path, capsys):
    assert run_cli(capsys, "stats", str(tmp_path / "missing.json"))[0] == 1


def test_exit_code_wrong_dimension(tmp_path, capsys):
    path = tmp_path / "g.json"
    run_cli(capsys, "gen", "uniform(3,2,1)", "--out", str(path))
    assert run_cli(capsys, "elevate", str(path))[0] == 4
    code, _, err = run_cli(
        capsys, "select-locations", str(path), "--points", "0.5,0.5"
    )
    assert code == 4


def test_exit_code_bad_camera(tmp_path, capsys):
    path = tmp_path / "g.json"
    run_cli(capsys, "gen", "paper2d", "--out", str(path))
    assert run_cli(capsys, "adaptive", str(path), "--camera", "1,2,3")[0] == 3
    assert run_cli(capsys, "adaptive", str(path), "--camera", "0,1,1,1,0,0")[0] == 3


def test_exit_code_obj_for_mask_output(tmp_path, capsys):
    path = tmp_path / "g.json"
    run_cli(capsys, "gen", "uniform(2,2,1)", "--out", str(path))
    code, _, _ = run_cli(
        capsys, "select-ids", str(path), "--ids", "0", "--preserve-topology",
        "--out", str(tmp_path / "m.obj"), "--format", "obj",
    )
    assert code == 3


def test_argparse_usage_errors_exit_3(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["adaptive", str(tmp_path / "g.json")])  # missing --camera
    assert exc.value.code == 3


def test_generate_named_unknown():
    with pytest.raises(UnknownCanonicalGrid):
        generate_named("paper4d")


def test_generate_named_variants():
    assert generate_named("uniform(2,2,0)").total_cells == 1
    assert generate_named("paper2d").spec.root_extent == (2, 3)
    assert generate_named("paper3d").spec.root_extent == (3, 3, 2)
    g = generate_named("random(2,3,2)", seed=7)
    assert g.spec.factor == 3
