"""Smoke test for the isac_thz extension module.

Build and install first:
    pip install --no-build-isolation -e crates/python
then run:
    python python/smoke_test.py
"""

import math

import isac_thz as it


def close(a, b, rel):
    return abs(a - b) <= rel * abs(b)


def main():
    cfg = it.Config()
    assert cfg.n_b == 128 and close(cfg.lambda_b, 2e-3, 1e-12)

    # config round trip through TOML
    again = it.Config.from_toml(cfg.to_toml())
    assert again.to_toml() == cfg.to_toml()
    try:
        it.Config.from_toml("[system]\nbogus = 1\n")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown key accepted")

    rows = it.table2(cfg)
    assert len(rows) == 33
    assert close(rows[0]["d_max"], 78.1, 0.01)
    assert close(rows[0]["delta_db"], 0.039, 0.01)

    pat = it.optimal_pattern(cfg)
    assert (pat["U"], pat["V"]) == (1, 5)
    assert abs(pat["alpha"] - 0.3144) < 1e-3

    five_g = it.sensing_ability_of(cfg, "5g")
    assert five_g["delta_db"] == 0.3 and five_g["d_max"] is None

    jsrs = it.beam_misalignment(cfg, "jsrs")
    base = it.beam_misalignment(cfg, "5g")
    perfect = it.beam_misalignment(cfg, "perfect")
    assert perfect["p_ms"] <= jsrs["p_ms"] < base["p_ms"]
    assert perfect["p_ms"] == perfect["p_to"]

    assert close(it.blockage_probability(cfg, 52.0), 1 - math.exp(-0.02 * 51), 1e-12)
    assert it.timeout_probability(cfg) <= it.expected_closest_blockage(cfg)

    cov = it.coverage_probability(cfg, 20.0, 5.0, "jsrs")
    assert 0.0 <= cov["p_cvp"] <= 1.0
    assert close(cov["p_cvp"], (1 - cov["p_ms"]) * cov["p_cm"], 1e-12)

    est = it.estimate_timeout(cfg, trials=20_000, seed=3)
    assert abs(est["sigmas_off"]) < 4.0, est
    est = it.estimate_coverage(cfg, 20.0, 5.0, "jsrs", trials=5_000, seed=4)
    assert abs(est["mean"] - est["analytic"]) < 0.03, est

    assert close(it.exp_integral_e1(1.0), 0.21938393439552029, 1e-12)
    assert close(it.erfc(0.5), 0.4795001221869535, 1e-12)

    print("isac_thz smoke test passed")


if __name__ == "__main__":
    main()
