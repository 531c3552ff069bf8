#!/usr/bin/env python3
"""Regenerate the bundled scenario fixtures under src/tendbot/scenarios//.

Run from the repo root: python tools/make_scenarios.py
"""

import json
import math
import os

import numpy as np

from tendbot.arm import ArmModel
from tendbot.geometry import rot_x

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "tendbot", "scenarios")


def box(cx, cy, w, h):
    return [
        [cx - w / 2, cy - h / 2],
        [cx + w / 2, cy - h / 2],
        [cx + w / 2, cy + h / 2],
        [cx - w / 2, cy + h / 2],
    ]


def box_mesh(x0, y0, z0, x1, y1, z1):
    """Axis-aligned box as 12 triangles with outward winding."""
    v = [
        [x0, y0, z0], [x1, y0, z0], [x1, y1, z0], [x0, y1, z0],
        [x0, y0, z1], [x1, y0, z1], [x1, y1, z1], [x0, y1, z1],
    ]
    f = [
        [0, 2, 1], [0, 3, 2],  # bottom
        [4, 5, 6], [4, 6, 7],  # top
        [0, 1, 5], [0, 5, 4],  # y0 side
        [2, 3, 7], [2, 7, 6],  # y1 side
        [1, 2, 6], [1, 6, 5],  # x1 side
        [3, 0, 4], [3, 4, 7],  # x0 side
    ]
    return v, f


def merge_meshes(*meshes):
    verts, tris = [], []
    for v, f in meshes:
        base = len(verts)
        verts += v
        tris += [[i + base, j + base, k + base] for (i, j, k) in f]
    return verts, tris


def ur5_link_spheres(per_link=6):
    """Sphere decomposition along each DH link segment, in link frames.

    The vector from frame i's origin back to frame i-1's origin, expressed
    in frame i, is constant: -Rx(-alpha_i) @ [a_i, 0, d_i].
    """
    arm = ArmModel.ur5_default()
    links = []
    for i in range(6):
        u = -(rot_x(-arm.alpha[i]) @ np.array([arm.a[i], 0.0, arm.d[i]]))
        length = float(np.linalg.norm(u))
        radius = max(0.05, length / (2 * per_link))
        spheres = []
        for k in range(per_link):
            s = (k + 0.5) / per_link
            c = (s * u).tolist()
            spheres.append({"center": c, "radius": radius})
        links.append(spheres)
    return links


def default_robot(base_radius=0.25):
    return {
        "base_radius": base_radius,
        "wheel_base": 0.4,
        "max_v": 0.6,
        "max_omega": 1.2,
        "max_accel": 0.8,
        "arm_mount": {
            "rotation": np.eye(3).tolist(),
            "translation": [0.15, 0.0, 0.35],
        },
        "link_spheres": ur5_link_spheres(),
    }


def walls(x0, y0, x1, y1, t=0.1):
    return [
        {"vertices": box((x0 + x1) / 2, y0 + t / 2, x1 - x0, t)},
        {"vertices": box((x0 + x1) / 2, y1 - t / 2, x1 - x0, t)},
        {"vertices": box(x0 + t / 2, (y0 + y1) / 2, t, y1 - y0 - 2 * t)},
        {"vertices": box(x1 - t / 2, (y0 + y1) / 2, t, y1 - y0 - 2 * t)},
    ]


def printer_cell():
    body = box_mesh(6.0, 2.7, 0.0, 6.6, 3.3, 0.55)
    gantry = box_mesh(6.45, 2.8, 0.55, 6.6, 3.2, 0.95)
    mv, mt = merge_meshes(body, gantry)
    return {
        "floor": [0.0, 0.0, 8.0, 6.0],
        "obstacles": walls(0, 0, 8, 6)
        + [
            {"vertices": box(2.0, 4.5, 1.2, 0.8)},  # side table
            {"vertices": box(2.0, 1.5, 1.2, 0.8)},  # drop table
        ],
        "machine_mesh": {"vertices": mv, "triangles": mt},
        "part": {
            "pose": {"rotation": np.eye(3).tolist(), "translation": [6.15, 3.0, 0.59]},
            "radius": 0.04,
        },
        "dynamic_obstacles": [],
        "robot": default_robot(),
        "arm": ArmModel.ur5_default().as_dict(),
        "start_pose": {"x": 1.0, "y": 3.0, "theta": 0.0},
        "noise": {},
        "seed": 0,
    }


def corridor():
    return {
        "floor": [0.0, 0.0, 6.0, 4.0],
        "obstacles": [
            {"vertices": box(3.0, 1.0, 4.0, 0.8)},  # lower wall, inner face y=1.4
            {"vertices": box(3.0, 3.0, 4.0, 0.8)},  # upper wall, inner face y=2.6
        ],
        "machine_mesh": None,
        "part": None,
        "dynamic_obstacles": [],
        "robot": default_robot(),
        "arm": ArmModel.ur5_default().as_dict(),
        "start_pose": {"x": 0.5, "y": 2.0, "theta": 0.0},
        "noise": {},
        "seed": 0,
    }


def dead_end():
    # 0.9 m wide pocket closed at x=3.5; small robot so the pocket stays traversable
    return {
        "floor": [0.0, 0.0, 5.0, 4.0],
        "obstacles": [
            {"vertices": box(2.25, 1.175, 2.5, 0.75)},  # lower wall, inner face y=1.55
            {"vertices": box(2.25, 2.825, 2.5, 0.75)},  # upper wall, inner face y=2.45
            {"vertices": box(3.65, 2.0, 0.3, 2.4)},  # end cap at x=3.5
        ],
        "machine_mesh": None,
        "part": None,
        "dynamic_obstacles": [],
        "robot": default_robot(base_radius=0.15),
        "arm": ArmModel.ur5_default().as_dict(),
        "start_pose": {"x": 2.8, "y": 2.0, "theta": 0.0},
        "noise": {},
        "seed": 0,
    }


def two_obstacles():
    return {
        "floor": [0.0, 0.0, 8.0, 6.0],
        "obstacles": [
            {"vertices": box(3.2, 2.1, 0.9, 0.9)},
            {"vertices": box(4.8, 3.9, 0.9, 0.9)},
        ],
        "machine_mesh": None,
        "part": None,
        "dynamic_obstacles": [],
        "robot": default_robot(),
        "arm": ArmModel.ur5_default().as_dict(),
        "start_pose": {"x": 1.0, "y": 3.0, "theta": 0.0},
        "noise": {},
        "seed": 0,
    }


def open_loop():
    return {
        "floor": [0.0, 0.0, 10.0, 10.0],
        "obstacles": [],
        "machine_mesh": None,
        "part": None,
        "dynamic_obstacles": [],
        "robot": default_robot(),
        "arm": ArmModel.ur5_default().as_dict(),
        "start_pose": {"x": 2.0, "y": 2.0, "theta": 0.0},
        "noise": {},
        "seed": 0,
    }


def main():
    scenarios = {
        "printer_cell": printer_cell(),
        "corridor": corridor(),
        "dead_end": dead_end(),
        "two_obstacles": two_obstacles(),
        "open_loop": open_loop(),
    }
    os.makedirs(OUT_DIR, exist_ok=True)
    for name, data in scenarios.items():
        path = os.path.join(OUT_DIR, f"{name}.json")
        with open(path, "w") as f:
            json.dump(data, f, indent=1)
        print("wrote", path)


if __name__ == "__main__":
    main()
