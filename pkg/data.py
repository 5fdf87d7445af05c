from os.path import dirname, join


ROOT = dirname(__file__)


data = {
    "name": "fockop",
    "tolerances": {
        "rank_tol": None,
        "psd_tol": 1e-10,
        "boundary_tol": 1e-9
    },
    # 次元ごとのvalidateの既定の次数です。
    "degrees": {1: 16, 2: 10, 3: 6},
    "fallback_degree": 4,
    "sampling": {
        "samples": 20,
        "radius": 2.0,
        "seed": 0
    },
    "bisect_tol": 1e-9,
    "diagonal": {
        "horizon": 1000,
        "threshold": 1e6,
        "growth_exponent": 0.9,
        "gap_rows": 50
    },
    "output": "json",
    "exit_codes": {
        "ok": 0,
        "invalid": 2,
        "crosscheck": 3
    },
    "presets": join(ROOT, "data", "presets.json"),
    "templates": join(ROOT, "data")
}
