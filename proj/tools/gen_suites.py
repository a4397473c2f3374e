#!/usr/bin/env python3
"""Generates data/scenes, data/suites and data/fixtures.

Geometry here is plain numpy-free Python (Rodrigues, 4x4 products) and does not
share code with the C++ executors. Rerunning overwrites the files.
"""

import json
import math
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"

DEFAULT_SCENE = [
    ("RedSphere", "sphere", "red", (0.0, 0.0, 0.0), 1.0),
    ("BlueCube", "cube", "blue", (4.0, 0.0, 0.0), 1.0),
    ("GreenSphere", "sphere", "green", (-3.0, 0.0, 2.0), 0.7),
    ("YellowCube", "cube", "yellow", (4.0, 0.0, -3.0), 1.0),
    ("PurpleSphere", "sphere", "purple", (0.0, 0.0, -4.0), 0.8),
]

SCENE_MAP = {o[0]: o for o in DEFAULT_SCENE}
LABEL = {o[0]: f"{o[2]} {o[1]}" for o in DEFAULT_SCENE}

AXIS_PLANE = {0: (2, 3), 1: (3, 1), 2: (1, 2)}
AXIS_NAME = "xyz"


def scene_doc(objects):
    return {
        "version": 1,
        "revision": 0,
        "objects": [
            {"name": n, "shape": s, "color": c, "center": list(p), "size": r}
            for n, s, c, p, r in objects
        ],
    }


# ---------------------------------------------------------------- geometry

def add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def scale(a, s):
    return tuple(x * s for x in a)


def rodrigues(p, axis, angle):
    n = math.sqrt(sum(x * x for x in axis))
    k = tuple(x / n for x in axis)
    c, s = math.cos(angle), math.sin(angle)
    kxp = (k[1] * p[2] - k[2] * p[1], k[2] * p[0] - k[0] * p[2], k[0] * p[1] - k[1] * p[0])
    kdp = sum(a * b for a, b in zip(k, p))
    return tuple(p[i] * c + kxp[i] * s + k[i] * kdp * (1 - c) for i in range(3))


def plane_axis(plane):
    i, j = plane
    ei = [0.0, 0.0, 0.0]
    ej = [0.0, 0.0, 0.0]
    ei[i - 1] = 1.0
    ej[j - 1] = 1.0
    return (ei[1] * ej[2] - ei[2] * ej[1], ei[2] * ej[0] - ei[0] * ej[2], ei[0] * ej[1] - ei[1] * ej[0])


def run_ops(center, size, ops):
    """Ops in execution order. Returns (center, size)."""
    if len(ops) == 1 and ops[0][0] == "D":
        return center, size * ops[0][1]
    for op in ops:
        if op[0] == "T":
            center = add(center, op[1])
        elif op[0] == "R":
            center = rodrigues(center, plane_axis(op[2]), op[1])
        else:
            center = scale(center, op[1])
    return center, size


def mat_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)] for i in range(4)]


def mat_of(op):
    m = [[1.0 if i == j else 0.0 for j in range(4)] for i in range(4)]
    if op[0] == "T":
        for i in range(3):
            m[i][3] = op[1][i]
    elif op[0] == "R":
        for col in range(3):
            e = [0.0, 0.0, 0.0]
            e[col] = 1.0
            r = rodrigues(tuple(e), plane_axis(op[2]), op[1])
            for row in range(3):
                m[row][col] = r[row]
    else:
        for i in range(3):
            m[i][i] = op[1]
    return m


def mat_of_ops(ops):
    m = [[1.0 if i == j else 0.0 for j in range(4)] for i in range(4)]
    for op in ops:
        m = mat_mul(mat_of(op), m)
    return [[round(x, 6) + 0.0 for x in row] for row in m]


# ---------------------------------------------------------------- rendering

def num(x):
    x = round(x, 6) + 0.0
    return repr(float(x))


def angle_text(a):
    r = a / math.pi
    for den in range(1, 13):
        n = round(r * den)
        if n != 0 and abs(r * den - n) < 1e-12:
            g = math.gcd(abs(n), den)
            n, d = n // g, den // g
            s = "np.pi" if n == 1 else ("-np.pi" if n == -1 else f"{n}*np.pi")
            return s if d == 1 else f"{s}/{d}"
    return num(a)


def cga_factor(op):
    if op[0] == "T":
        parts = [f"{num(v)}*e{i + 1}" for i, v in enumerate(op[1]) if abs(v) > 1e-12]
        return "T(" + (" + ".join(parts) if parts else "0.0*e1") + ")"
    if op[0] == "R":
        return f"R({angle_text(op[1])}, e{op[2][0]}, e{op[2][1]})"
    return f"D({num(op[1])})"


def cga_text(ops):
    return " * ".join(cga_factor(op) for op in reversed(ops))


def se3_op(op):
    if op[0] == "T":
        return {"type": "T", "v": [round(v, 6) + 0.0 for v in op[1]]}
    if op[0] == "R":
        return {"type": "R", "axis": list(plane_axis(op[2])), "angle_rad": op[1]}
    return {"type": "D", "factor": op[1]}


def chain_entry(op):
    if op[0] == "T":
        return {"op": "translate", "v": [round(v, 6) + 0.0 for v in op[1]]}
    if op[0] == "R":
        return {"op": "rotate", "axis": list(plane_axis(op[2])), "angle_rad": op[1]}
    return {"op": "dilate", "factor": op[1]}


def render(strategy, assignments):
    """assignments: list of (name, ops). Returns the raw model text."""
    if strategy in ("simple_cga", "simple_cga_verbose", "shenlong_cga"):
        return json.dumps({n: cga_text(ops) for n, ops in assignments})
    if strategy == "compact_se3":
        return json.dumps({n: [se3_op(op) for op in ops] for n, ops in assignments})
    if strategy == "euclidean_mat4":
        return json.dumps({n: mat_of_ops(ops) for n, ops in assignments})
    raise ValueError(strategy)


def malformed(strategy, assignments, mode):
    text = render(strategy, assignments)
    if mode == "truncated":
        return text[: max(8, len(text) * 2 // 3)]
    if mode == "prose":
        return "Sure! Here is the edit you asked for: " + text.replace("{", "", 1)
    if mode == "int_plane":
        name, ops = assignments[0]
        return json.dumps({name: "R(np.pi/2, 1, 2) * " + cga_text(ops)})
    raise ValueError(mode)


# ---------------------------------------------------------------- relations

def box(name, scene=SCENE_MAP):
    _, _, _, c, r = scene[name]
    return tuple(x - r for x in c), tuple(x + r for x in c)


class Edit:
    """One instruction with its reference solution."""

    def __init__(self, instruction, assignments, rules, scene=SCENE_MAP):
        self.instruction = instruction
        self.assignments = assignments
        self.rules = rules
        self.scene = scene

    def expected_positions(self):
        out = {}
        for name, ops in self.assignments:
            c, _ = run_ops(self.scene[name][3], self.scene[name][4], ops)
            out[name] = [round(v, 6) + 0.0 for v in c]
        return out


def placement_rules(name, ops, scene):
    c, r = run_ops(scene[name][3], scene[name][4], ops)
    if len(ops) == 1 and ops[0][0] == "D":
        return [{"type": "scale_factor", "mover": name, "s": ops[0][1]}]
    return [{"type": "absolute_placement", "mover": name, "position": [round(v, 6) + 0.0 for v in c]}]


def on_top(m, t, scene=SCENE_MAP):
    mc, mr = scene[m][3], scene[m][4]
    tc = scene[t][3]
    top = box(t, scene)[1][1]
    d = (tc[0] - mc[0], top + mr - mc[1], tc[2] - mc[2])
    ops = [("T", d)]
    rules = [{"type": "surface_contact", "mover": m, "target": t, "axis": "y"}] + placement_rules(m, ops, scene)
    return Edit(f"Place the {LABEL[m]} on top of the {LABEL[t]}", [(m, ops)], rules, scene)


def left_of(m, t, scene=SCENE_MAP):
    mc, mr = scene[m][3], scene[m][4]
    dx = box(t, scene)[0][0] - mr - mc[0]
    ops = [("T", (dx, 0.0, 0.0))]
    rules = [{"type": "surface_contact", "mover": m, "target": t, "axis": "x"},
             {"type": "target_displacement", "mover": m, "delta": [dx, 0.0, 0.0]}]
    return Edit(f"Put the {LABEL[m]} next to the {LABEL[t]} on its left", [(m, ops)], rules, scene)


def right_of(m, t, scene=SCENE_MAP):
    mc, mr = scene[m][3], scene[m][4]
    tc = scene[t][3]
    d = (box(t, scene)[1][0] + mr - mc[0], tc[1] - mc[1], tc[2] - mc[2])
    ops = [("T", d)]
    rules = [{"type": "surface_contact", "mover": m, "target": t, "axis": "x"}] + placement_rules(m, ops, scene)
    return Edit(f"Move the {LABEL[m]} so it touches the right side of the {LABEL[t]}", [(m, ops)], rules, scene)


def in_front_of(m, t, scene=SCENE_MAP):
    mc, mr = scene[m][3], scene[m][4]
    tc = scene[t][3]
    d = (tc[0] - mc[0], tc[1] - mc[1], box(t, scene)[1][2] + mr - mc[2])
    ops = [("T", d)]
    rules = [{"type": "surface_contact", "mover": m, "target": t, "axis": "z"}] + placement_rules(m, ops, scene)
    return Edit(f"Place the {LABEL[m]} directly in front of the {LABEL[t]}, touching it", [(m, ops)], rules, scene)


def behind(m, t, scene=SCENE_MAP):
    mc, mr = scene[m][3], scene[m][4]
    tc = scene[t][3]
    d = (tc[0] - mc[0], tc[1] - mc[1], box(t, scene)[0][2] - mr - mc[2])
    ops = [("T", d)]
    rules = [{"type": "surface_contact", "mover": m, "target": t, "axis": "z"}] + placement_rules(m, ops, scene)
    return Edit(f"Place the {LABEL[m]} directly behind the {LABEL[t]}, touching it", [(m, ops)], rules, scene)


def below(m, t, scene=SCENE_MAP):
    mc, mr = scene[m][3], scene[m][4]
    tc = scene[t][3]
    d = (tc[0] - mc[0], box(t, scene)[0][1] - mr - mc[1], tc[2] - mc[2])
    ops = [("T", d)]
    rules = [{"type": "surface_contact", "mover": m, "target": t, "axis": "y"}] + placement_rules(m, ops, scene)
    return Edit(f"Hang the {LABEL[m]} directly under the {LABEL[t]}", [(m, ops)], rules, scene)


def between(m, a, b, scene=SCENE_MAP):
    mid = scale(add(scene[a][3], scene[b][3]), 0.5)
    d = sub(mid, scene[m][3])
    ops = [("T", d)]
    rules = [{"type": "midpoint", "mover": m, "a": a, "b": b}]
    return Edit(f"Move the {LABEL[m]} halfway between the {LABEL[a]} and the {LABEL[b]}", [(m, ops)], rules, scene)


def move_to(m, p, scene=SCENE_MAP):
    ops = [("T", sub(p, scene[m][3]))]
    rules = [{"type": "absolute_placement", "mover": m, "position": list(p)}]
    where = ", ".join(num(v) for v in p)
    return Edit(f"Move the {LABEL[m]} to the point ({where})", [(m, ops)], rules, scene)


def move_by(m, d, phrase, scene=SCENE_MAP):
    ops = [("T", d)]
    rules = [{"type": "target_displacement", "mover": m, "delta": list(d)}]
    return Edit(phrase.format(f"the {LABEL[m]}"), [(m, ops)], rules, scene)


def rotate(m, axis, degrees, scene=SCENE_MAP):
    ops = [("R", math.radians(degrees), AXIS_PLANE[axis])]
    rules = placement_rules(m, ops, scene)
    return Edit(f"Rotate the {LABEL[m]} {degrees} degrees around the {AXIS_NAME[axis]} axis", [(m, ops)], rules, scene)


def resize(m, s, scene=SCENE_MAP):
    ops = [("D", s)]
    rules = [{"type": "scale_factor", "mover": m, "s": s}]
    return Edit(f"Scale the {LABEL[m]} by {s}", [(m, ops)], rules, scene)


def swap(a, b, scene=SCENE_MAP):
    da = sub(scene[b][3], scene[a][3])
    assignments = [(a, [("T", da)]), (b, [("T", scale(da, -1.0))])]
    rules = [{"type": "absolute_placement", "mover": a, "position": list(scene[b][3])},
             {"type": "absolute_placement", "mover": b, "position": list(scene[a][3])}]
    return Edit(f"Swap the positions of the {LABEL[a]} and the {LABEL[b]}", assignments, rules, scene)


def combine(instruction, *edits):
    assignments = []
    rules = []
    for e in edits:
        assignments += e.assignments
        rules += e.rules
    return Edit(instruction, assignments, rules, edits[0].scene)


def align_x(m, t, scene=SCENE_MAP):
    dx = scene[t][3][0] - scene[m][3][0]
    ops = [("T", (dx, 0.0, 0.0))]
    rules = [{"type": "target_displacement", "mover": m, "delta": [dx, 0.0, 0.0]}]
    return Edit(f"Slide the {LABEL[m]} along x until it lines up with the {LABEL[t]}", [(m, ops)], rules, scene)


def raise_after(edit, dy):
    name, ops = edit.assignments[0]
    ops2 = ops + [("T", (0.0, dy, 0.0))]
    rules = placement_rules(name, ops2, edit.scene)
    return Edit(edit.instruction + f", then raise it by {num(dy)} units", [(name, ops2)], rules, edit.scene)


# ---------------------------------------------------------------- failure modes

def wrong(edit, mode):
    """A parse-valid edit that misses the goal."""
    out = []
    for i, (name, ops) in enumerate(edit.assignments):
        if i > 0:
            out.append((name, ops))
            continue
        op = ops[0]
        if mode == "sign" and op[0] == "T":
            ops = [("T", scale(op[1], -1.0))] + ops[1:]
        elif mode == "absolute" and op[0] == "T":
            target = add(edit.scene[name][3], op[1])
            if math.dist(target, op[1]) < 1.0:
                target = add(target, (2.0, 0.0, 0.0))
            ops = [("T", target)] + ops[1:]
        elif mode == "offset" and op[0] == "T":
            ops = [("T", add(op[1], (1.5, 0.0, 0.0)))] + ops[1:]
        elif op[0] == "R":
            ops = [("R", -op[1] if mode == "sign" else op[1] / 2, op[2])] + ops[1:]
        elif op[0] == "D":
            ops = [("T", (0.0, op[1], 0.0))]
        else:
            ops = [("T", add(op[1], (0.0, 2.0, 0.0)))] + ops[1:]
        out.append((name, ops))
    return out


WRONG_MODES = ["absolute", "sign", "offset"]


def is_wrong(edit, assignments):
    """Independent check that the wrong edit really fails the rules."""
    pos = {}
    size = {}
    for name, obj in edit.scene.items():
        pos[name], size[name] = obj[3], obj[4]
    for name, ops in assignments:
        pos[name], size[name] = run_ops(edit.scene[name][3], edit.scene[name][4], ops)
    for r in edit.rules:
        m = r["mover"]
        if r["type"] == "absolute_placement" and math.dist(pos[m], r["position"]) > 0.5:
            return True
        if r["type"] == "target_displacement" and math.dist(sub(pos[m], edit.scene[m][3]), r["delta"]) > 0.5:
            return True
        if r["type"] == "midpoint" and math.dist(pos[m], scale(add(pos[r["a"]], pos[r["b"]]), 0.5)) > 0.5:
            return True
        if r["type"] == "scale_factor" and abs(size[m] / edit.scene[m][4] - r["s"]) > 1e-3 * r["s"]:
            return True
        if r["type"] == "surface_contact":
            k = "xyz".index(r["axis"])
            t = r["target"]
            lo_m, hi_m = pos[m][k] - size[m], pos[m][k] + size[m]
            lo_t, hi_t = pos[t][k] - size[t], pos[t][k] + size[t]
            gap = lo_m - hi_t if pos[m][k] >= pos[t][k] else lo_t - hi_m
            if abs(gap) > 0.5:
                return True
    return False


def wrong_edit(edit, seed):
    for k in range(len(WRONG_MODES) + 1):
        mode = (WRONG_MODES + ["nudge"])[(seed + k) % (len(WRONG_MODES) + 1)]
        a = wrong(edit, mode)
        if is_wrong(edit, a):
            return a
    raise RuntimeError("no failing variant for " + edit.instruction)


# ---------------------------------------------------------------- fixtures

def spread_tokens(total, count, rng):
    """count positive integers summing to total."""
    base = [total // count] * count
    for i in range(total - sum(base)):
        base[i] += 1
    for _ in range(count * 2):
        i, j = rng.randrange(count), rng.randrange(count)
        d = rng.randint(0, 4)
        if base[i] - d > 5:
            base[i] -= d
            base[j] += d
    return base


def entry(strategy, instruction, text, completion_tokens, rng, attempt=None, trial=None):
    e = {"strategy": strategy, "instruction": instruction}
    if attempt is not None:
        e["attempt"] = attempt
    if trial is not None:
        e["trial"] = trial
    e["text"] = text
    e["prompt_tokens"] = 180 + rng.randint(0, 40)
    e["completion_tokens"] = completion_tokens
    e["latency_s"] = round(0.6 + rng.random() * 0.9, 3)
    return e


def outcome_plan(n, ok, parse_fail, rng, blocked=()):
    """blocked: indices whose correct answer the output format cannot express."""
    plan = ["ok"] * ok + ["parse"] * parse_fail + ["wrong"] * (n - ok - parse_fail)
    free = [i for i in range(n) if i not in blocked]
    assert ok <= len(free)
    while True:
        rng.shuffle(plan)
        if all(plan[i] != "ok" for i in blocked):
            return plan


PARSE_MODES = ["truncated", "prose", "int_plane"]


def scale_tasks(edits):
    return {i for i, e in enumerate(edits) if any(r["type"] == "scale_factor" for r in e.rules)}


def response_for(strategy, edit, outcome, i):
    if outcome == "ok":
        return render(strategy, edit.assignments)
    if outcome == "wrong":
        return render(strategy, wrong_edit(edit, i))
    modes = PARSE_MODES if strategy.endswith("_cga") or strategy == "simple_cga_verbose" else PARSE_MODES[:2]
    return malformed(strategy, edit.assignments, modes[i % len(modes)])


def write(path, doc):
    keys = [(e["strategy"], e["instruction"], e.get("attempt"), e.get("trial")) for e in doc.get("entries", [])]
    assert len(keys) == len(set(keys)), f"duplicate fixture keys in {path.name}"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1) + "\n")


def task_doc(tid, edit, methods=None, scene="default", extra=None):
    d = {"id": tid, "instruction": edit.instruction, "scene": scene}
    if methods:
        d["methods"] = methods
    d["semantic_rules"] = edit.rules
    if extra:
        d.update(extra)
    return d


# ---------------------------------------------------------------- suites

def hard_pack_edits():
    S = "RedSphere", "BlueCube", "GreenSphere", "YellowCube", "PurpleSphere"
    red, blue, green, yellow, purple = S
    return [
        on_top(green, yellow),
        left_of(purple, blue),
        between(green, red, yellow),
        right_of(red, blue),
        in_front_of(purple, red),
        behind(green, blue),
        below(red, yellow),
        combine("Put the red sphere on top of the blue cube and the purple sphere on top of the yellow cube",
                on_top(red, blue), on_top(purple, yellow)),
        move_to(blue, (-2.0, 0.0, 5.0)),
        rotate(yellow, 1, 90),
        resize(purple, 1.5),
        swap(red, blue),
        move_by(yellow, (0.0, 3.0, 0.0), "Lift {} 3 units up"),
        between(red, blue, purple),
        left_of(yellow, green),
        on_top(purple, red),
        align_x(green, blue),
        rotate(blue, 2, 180),
        raise_after(behind(red, yellow), 1.0),
        combine("Shrink the blue cube by half and move the red sphere 2 units to the left",
                resize(blue, 0.5), move_by(red, (-2.0, 0.0, 0.0), "Move {} 2 units left")),
    ]


HARD_METHODS = ["simple_cga", "shenlong_cga", "euclidean_mat4", "compact_se3"]


def gen_hard_pack(rng):
    edits = hard_pack_edits()
    tasks = [task_doc(f"hard-{i + 1:02d}", e) for i, e in enumerate(edits)]
    write(DATA / "suites" / "hard-pack.json", {
        "name": "hard-pack",
        "description": "20 relational edits on the five-object scene",
        "methods": HARD_METHODS, "k": 1, "trials_per_task": 1, "validator": "semantic", "seed": 20,
        "tasks": tasks,
    })
    semantic = {"simple_cga": 9, "shenlong_cga": 9, "euclidean_mat4": 5, "compact_se3": 9}
    parse_fail = {"shenlong_cga": 1}
    tokens = {"simple_cga": 36.85, "shenlong_cga": 56.47, "euclidean_mat4": 64.15, "compact_se3": 23.65}
    entries = []
    for m in HARD_METHODS:
        plan = outcome_plan(20, semantic[m], parse_fail.get(m, 0), rng, scale_tasks(edits) if m == "euclidean_mat4" else ())
        ok_rows = 20 - parse_fail.get(m, 0)
        toks = spread_tokens(round(tokens[m] * ok_rows), ok_rows, rng)
        it = iter(toks)
        for i, (e, o) in enumerate(zip(edits, plan)):
            t = next(it) if o != "parse" else 40 + rng.randint(0, 30)
            entries.append(entry(m, e.instruction, response_for(m, e, o, i), t, rng))
    write(DATA / "fixtures" / "hard-pack.json", {"version": 1, "provider_id": "mock-hard-pack", "entries": entries})


def shifted_scene(v):
    rng = random.Random(1000 + v)
    objs = {}
    for n, s, c, p, r in DEFAULT_SCENE:
        q = tuple(round(x + rng.uniform(-1.5, 1.5), 1) + 0.0 for x in p)
        objs[n] = (n, s, c, q, r)
    return objs


def gen_powered(rng):
    edits = []
    tids = []
    for v in range(5):
        sc = SCENE_MAP if v == 0 else shifted_scene(v)
        base = [
            lambda: on_top("GreenSphere", "YellowCube", sc),
            lambda: left_of("PurpleSphere", "BlueCube", sc),
            lambda: between("GreenSphere", "RedSphere", "YellowCube", sc),
            lambda: right_of("RedSphere", "BlueCube", sc),
            lambda: in_front_of("PurpleSphere", "RedSphere", sc),
            lambda: behind("GreenSphere", "BlueCube", sc),
            lambda: below("RedSphere", "YellowCube", sc),
            lambda: on_top("RedSphere", "BlueCube", sc),
            lambda: move_to("BlueCube", (-2.0 + v, 0.0, 5.0 - v), sc),
            lambda: rotate("YellowCube", 1, 90 if v % 2 == 0 else 45, sc),
            lambda: resize("PurpleSphere", 1.5 + 0.25 * v, sc),
            lambda: swap("RedSphere", "BlueCube", sc),
            lambda: move_by("YellowCube", (0.0, 3.0 + v, 0.0), f"Lift {{}} {3 + v} units up", sc),
            lambda: between("RedSphere", "BlueCube", "PurpleSphere", sc),
            lambda: left_of("YellowCube", "GreenSphere", sc),
            lambda: on_top("PurpleSphere", "RedSphere", sc),
            lambda: align_x("GreenSphere", "BlueCube", sc),
            lambda: rotate("BlueCube", 2, 180 if v % 2 == 0 else 90, sc),
            lambda: in_front_of("YellowCube", "BlueCube", sc),
            lambda: resize("BlueCube", 0.5 + 0.1 * v, sc),
        ]
        for j, make in enumerate(base):
            e = make()
            e.instruction += f" (layout {v + 1})"
            edits.append(e)
            tids.append((f"pow-{j + 1:02d}-v{v + 1}", v))
    tasks = []
    for (tid, v), e in zip(tids, edits):
        scene = "default" if v == 0 else scene_doc(e.scene.values())
        tasks.append(task_doc(tid, e, scene=scene))
    write(DATA / "suites" / "powered.json", {
        "name": "powered",
        "description": "20 relational edits x 5 layouts",
        "methods": HARD_METHODS, "k": 1, "trials_per_task": 1, "validator": "semantic", "seed": 100,
        "tasks": tasks,
    })
    semantic = {"simple_cga": 45, "shenlong_cga": 44, "euclidean_mat4": 24, "compact_se3": 42}
    parse_fail = {"shenlong_cga": 5}
    tokens = {"simple_cga": 37.34, "shenlong_cga": 48.13, "euclidean_mat4": 63.38, "compact_se3": 21.45}
    entries = []
    for m in HARD_METHODS:
        plan = outcome_plan(100, semantic[m], parse_fail.get(m, 0), rng, scale_tasks(edits) if m == "euclidean_mat4" else ())
        ok_rows = 100 - parse_fail.get(m, 0)
        it = iter(spread_tokens(round(tokens[m] * ok_rows), ok_rows, rng))
        for i, (e, o) in enumerate(zip(edits, plan)):
            t = next(it) if o != "parse" else 40 + rng.randint(0, 30)
            entries.append(entry(m, e.instruction, response_for(m, e, o, i), t, rng))
    write(DATA / "fixtures" / "powered.json", {"version": 1, "provider_id": "mock-powered", "entries": entries})


STEP_PHRASES = {
    "T": lambda op: "move it by ({})".format(", ".join(num(v) for v in op[1])),
    "R": lambda op: "rotate it {} degrees about the {} axis".format(
        round(math.degrees(op[1])), AXIS_NAME[[a for a, p in AXIS_PLANE.items() if p == op[2]][0]]),
    "D": lambda op: f"scale it about the origin by {num(op[1])}",
}


def random_chain(rng, length):
    ops = []
    kinds = ["T", "R", "D"]
    while len(ops) < length:
        k = rng.choice(kinds)
        if ops and ops[-1][0] == k:
            continue
        if k == "T":
            ops.append(("T", tuple(float(rng.randint(-4, 4)) for _ in range(3))))
        elif k == "R":
            ops.append(("R", math.radians(rng.choice([30, 45, 60, 90, 120, 180, -90])), AXIS_PLANE[rng.randrange(3)]))
        else:
            ops.append(("D", rng.choice([0.5, 1.5, 2.0, 3.0])))
    return ops


def sequence_wrong(ops, i):
    if i % 2 == 0 and len(ops) >= 2:
        return [ops[1], ops[0]] + ops[2:]
    return ops[:-1]


def gen_sequence(rng):
    names = [o[0] for o in DEFAULT_SCENE]
    tasks = []
    chains = []
    seen = set()
    while len(tasks) < 120:
        name = names[len(tasks) % len(names)]
        ops = random_chain(rng, 3 + len(tasks) % 3)
        steps = [STEP_PHRASES[op[0]](op) for op in ops]
        instruction = f"Take the {LABEL[name]}: first " + ", then ".join(steps)
        if instruction in seen:
            continue
        seen.add(instruction)
        tasks.append({
            "id": f"seq-{len(tasks) + 1:03d}",
            "instruction": instruction,
            "scene": "default",
            "chain_object": name,
            "expected_chain": [chain_entry(op) for op in ops],
        })
        chains.append((name, ops))
    write(DATA / "suites" / "sequence-stress.json", {
        "name": "sequence-stress",
        "description": "120 multi-step chains of 3 to 5 operations",
        "methods": ["simple_cga", "compact_se3"], "k": 1, "trials_per_task": 1, "validator": "fidelity", "seed": 120,
        "tasks": tasks,
    })
    fidelity = {"simple_cga": 117, "compact_se3": 108}
    tokens = {"simple_cga": 112.6, "compact_se3": 133.6}
    entries = []
    for m in ("simple_cga", "compact_se3"):
        plan = outcome_plan(120, fidelity[m], 0, rng)
        it = iter(spread_tokens(round(tokens[m] * 120), 120, rng))
        for i, (t, (name, ops), o) in enumerate(zip(tasks, chains, plan)):
            got = ops if o == "ok" else sequence_wrong(ops, i)
            entries.append(entry(m, t["instruction"], render(m, [(name, got)]), next(it), rng))
    write(DATA / "fixtures" / "sequence-stress.json", {"version": 1, "provider_id": "mock-sequence", "entries": entries})


ABLATION_METHODS = ["simple_cga", "simple_cga_verbose", "shenlong_cga", "euclidean_mat4"]


def gen_ablation(rng):
    red, blue, green, yellow, purple = (o[0] for o in DEFAULT_SCENE)
    edits = [
        on_top(green, yellow), left_of(purple, blue), between(green, red, yellow), right_of(red, blue),
        move_to(blue, (-2.0, 0.0, 5.0)), rotate(yellow, 1, 90), resize(purple, 1.5),
        move_by(yellow, (0.0, 3.0, 0.0), "Lift {} 3 units up"), on_top(purple, red), behind(green, blue),
    ]
    tasks = [task_doc(f"abl-{i + 1:02d}", e) for i, e in enumerate(edits)]
    write(DATA / "suites" / "ablation.json", {
        "name": "ablation",
        "description": "prompt verbosity ablation, 10 tasks x 5 trials",
        "methods": ABLATION_METHODS, "k": 2, "trials_per_task": 5, "validator": "parse", "seed": 50,
        "tasks": tasks,
    })
    entries = []
    tokens = {"simple_cga": 42, "simple_cga_verbose": 47, "shenlong_cga": 60, "euclidean_mat4": 57}
    for m in ABLATION_METHODS:
        for i, e in enumerate(edits):
            if m == "shenlong_cga" and i in (2, 7):
                continue
            entries.append(entry(m, e.instruction, render(m, e.assignments), tokens[m] + rng.randint(-6, 6), rng))
    # Shenlong: two tasks fail to parse on the first attempt in every trial;
    # one trial of one of them recovers on the retry.
    for i in (2, 7):
        e = edits[i]
        entries.append(entry("shenlong_cga", e.instruction, malformed("shenlong_cga", e.assignments, "int_plane"), 58, rng))
    entries.append(entry("shenlong_cga", edits[2].instruction, render("shenlong_cga", edits[2].assignments), 61, rng,
                         attempt=1, trial=3))
    entries.append(entry("shenlong_cga", edits[7].instruction, malformed("shenlong_cga", edits[7].assignments, "truncated"),
                         60, rng, attempt=1))
    entries.append(entry("shenlong_cga", edits[2].instruction, malformed("shenlong_cga", edits[2].assignments, "truncated"),
                         60, rng, attempt=1))
    write(DATA / "fixtures" / "ablation.json", {"version": 1, "provider_id": "mock-ablation", "entries": entries})


CORE_METHODS = ["shenlong_cga", "simple_cga", "euclidean_mat4"]


def generated_scene(count, seed, extent, suffix_all=False):
    rng = random.Random(seed)
    colors = ["red", "blue", "green", "yellow", "purple", "orange", "cyan", "magenta", "white", "black"]
    used = set()
    objs = {}
    while len(objs) < count:
        color = colors[len(objs) % len(colors)]
        shape = rng.choice(["sphere", "cube"])
        k = len(objs) // len(colors)
        name = f"{color.capitalize()}{shape.capitalize()}" + (str(k + 1) if k or suffix_all else "")
        if name in used:
            name += "b"
        used.add(name)
        center = tuple(round(rng.uniform(-extent, extent), 1) + 0.0 for _ in range(3))
        objs[name] = (name, shape, color, center, round(rng.uniform(0.5, 1.5), 2))
    return objs


def gen_core(rng):
    red, blue, green, yellow, purple = (o[0] for o in DEFAULT_SCENE)
    five = [
        on_top(green, yellow), left_of(purple, blue), between(green, red, yellow), right_of(red, blue),
        rotate(yellow, 1, 90), resize(purple, 1.5), swap(red, blue), move_to(blue, (-2.0, 0.0, 5.0)),
    ]
    stress = [
        raise_after(behind(red, yellow), 1.0),
        combine("Put the red sphere on top of the blue cube and the purple sphere on top of the yellow cube",
                on_top(red, blue), on_top(purple, yellow)),
        rotate(blue, 2, 180),
        raise_after(between(red, blue, purple), 2.0),
        combine("Shrink the blue cube by half and move the red sphere 2 units to the left",
                resize(blue, 0.5), move_by(red, (-2.0, 0.0, 0.0), "Move {} 2 units left")),
        raise_after(left_of(yellow, green), 0.5),
    ]
    ten = generated_scene(10, 10, 8.0)
    hundred = generated_scene(100, 100, 20.0, suffix_all=True)
    names10 = list(ten)
    names100 = list(hundred)
    for objs in (ten, hundred):
        for n, o in objs.items():
            LABEL[n] = f"{o[2]} {o[1]}" if n == f"{o[2].capitalize()}{o[1].capitalize()}" else n
    tenobj = [
        on_top(names10[0], names10[1], ten), left_of(names10[2], names10[3], ten),
        between(names10[4], names10[5], names10[6], ten), right_of(names10[7], names10[8], ten),
        rotate(names10[9], 2, 90, ten), resize(names10[3], 2.0, ten),
    ]
    accuracy = []
    pool = [red, blue, green, yellow, purple]
    for i in range(18):
        m = pool[i % 5]
        kind = i % 3
        if kind == 0:
            p = (float(rng.randint(-6, 6)), float(rng.randint(0, 4)), float(rng.randint(-6, 6)))
            accuracy.append(move_to(m, p))
        elif kind == 1:
            t = pool[(i + 1 + i // 5) % 5]
            accuracy.append(on_top(m, t))
        else:
            d = (float(rng.randint(-3, 3)), float(rng.randint(1, 3)), float(rng.randint(-3, 3)))
            accuracy.append(move_by(m, d, "Shift {{}} by ({})".format(", ".join(num(v) for v in d))))
    hundredobj = []
    for i in range(10):
        a, b = names100[i * 2], names100[i * 2 + 1]
        hundredobj.append(on_top(a, b, hundred) if i % 2 == 0 else left_of(a, b, hundred))

    write(DATA / "scenes" / "ten-object.json", scene_doc(ten.values()))
    write(DATA / "scenes" / "hundred-object.json", scene_doc(hundred.values()))

    tasks = []
    blocks = [("5obj", five, "default", {}), ("stress", stress, "default", {}),
              ("10obj", tenobj, "../scenes/ten-object.json", {}),
              ("accuracy", accuracy, "default", None),
              ("100obj", hundredobj, "../scenes/hundred-object.json", {"context_limit": 30})]
    all_edits = []
    for prefix, edits, scene, extra in blocks:
        for i, e in enumerate(edits):
            x = dict(extra) if extra is not None else {"expected_positions": e.expected_positions()}
            tasks.append(task_doc(f"{prefix}-{i + 1:02d}", e, scene=scene, extra=x))
            all_edits.append((prefix, e))
    write(DATA / "suites" / "core-33.json", {
        "name": "core-33",
        "description": "five-object, stress, ten-object, accuracy and hundred-object blocks",
        "methods": CORE_METHODS, "k": 2, "trials_per_task": 1, "validator": "semantic", "seed": 33,
        "tasks": tasks,
    })
    entries = []
    tokens = {"shenlong_cga": 55, "simple_cga": 38, "euclidean_mat4": 64}
    for m in CORE_METHODS:
        for i, (prefix, e) in enumerate(all_edits):
            if m == "euclidean_mat4" and i % 4 == 3:
                o = "wrong"
            elif m == "shenlong_cga" and i % 9 == 4:
                o = "parse"
            else:
                o = "ok"
            entries.append(entry(m, e.instruction, response_for(m, e, o, i), tokens[m] + rng.randint(-8, 8), rng))
            if o != "ok":
                entries.append(entry(m, e.instruction, response_for(m, e, "ok", i), tokens[m] + rng.randint(-8, 8), rng,
                                     attempt=1))
    write(DATA / "fixtures" / "core-33.json", {"version": 1, "provider_id": "mock-core", "entries": entries})


def gen_layering(rng):
    """12 raw outputs: 4 malformed, 4 parse-valid but wrong, 4 correct."""
    red, blue, green, yellow, purple = (o[0] for o in DEFAULT_SCENE)
    edits = [on_top(green, yellow), left_of(purple, blue), between(green, red, yellow), right_of(red, blue)]
    cases = []
    for i, e in enumerate(edits):
        mode = ["truncated", "prose", "int_plane", "truncated"][i]
        cases.append({"kind": "malformed", "task": task_doc(f"layer-m{i + 1}", e),
                      "output": malformed("simple_cga", e.assignments, mode)})
    for i, e in enumerate(edits):
        cases.append({"kind": "wrong", "task": task_doc(f"layer-w{i + 1}", e),
                      "output": render("simple_cga", wrong_edit(e, i))})
    for i, e in enumerate(edits):
        cases.append({"kind": "correct", "task": task_doc(f"layer-c{i + 1}", e),
                      "output": render("simple_cga", e.assignments)})
    write(DATA / "fixtures" / "layering.json", {"output_kind": "cga_json", "cases": cases})


def main():
    rng = random.Random(2024)
    write(DATA / "scenes" / "default.json", scene_doc(DEFAULT_SCENE))
    gen_hard_pack(rng)
    gen_powered(rng)
    gen_sequence(rng)
    gen_ablation(rng)
    gen_core(rng)
    gen_layering(rng)


if __name__ == "__main__":
    main()
