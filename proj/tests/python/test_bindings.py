import numpy as np
import pytest

import mapfbench as mb


def make_env(**overrides):
    params = dict(size=12, density=0.2, num_agents=6, obs_radius=3, max_episode_steps=100, seed=42)
    params.update(overrides)
    return mb.Env(mb.GridConfig(**params))


def random_script(steps, agents, seed=0):
    return np.random.default_rng(seed).integers(0, mb.ACTION_COUNT, size=(steps, agents))


def test_reset_shapes_and_determinism():
    env = make_env()
    obs = env.reset(42)
    assert obs.shape == (6, 3, 7, 7)
    assert obs.dtype == np.uint8
    assert obs.flags["C_CONTIGUOUS"]
    np.testing.assert_array_equal(obs, env.reset(42))
    # The observing agent sits at the centre of its own agents plane.
    assert (obs[:, 1, 3, 3] == 1).all()


def test_parity_with_native_episode():
    for on_target in ("nothing", "restart", "disappear"):
        for collisions in ("soft", "block_all"):
            cfg = mb.GridConfig(size=12, density=0.2, num_agents=6, obs_radius=3, max_episode_steps=100,
                                on_target=on_target, collision_system=collisions)
            script = random_script(100, 6, seed=7)
            ref_obs, ref_rew, ref_term, ref_trunc = mb.reference_episode(cfg, 42, script)
            env = mb.Env(cfg)
            obs = env.reset(42)
            np.testing.assert_array_equal(obs, ref_obs[0])
            t = 0
            while t < len(ref_rew):
                obs, rew, term, trunc, _ = env.step(script[t])
                np.testing.assert_array_equal(obs, ref_obs[t + 1])
                np.testing.assert_array_equal(rew, ref_rew[t])
                assert term == ref_term[t] and trunc == ref_trunc[t]
                t += 1
            assert env.terminated or env.truncated


def test_lifecycle_and_errors():
    env = make_env(num_agents=2, max_episode_steps=3)
    with pytest.raises(RuntimeError):
        env.step([0, 0])
    env.reset(1)
    with pytest.raises(ValueError):
        env.step([0, 7])
    with pytest.raises(ValueError):
        env.step([0])
    for _ in range(3):
        _, _, term, trunc, _ = env.step([mb.WAIT, mb.WAIT])
    assert trunc and not term
    with pytest.raises(RuntimeError):
        env.step([0, 0])
    env.reset(1)
    assert env.step_count == 0
    with pytest.raises(TypeError):
        env.reset("seed")
    with pytest.raises(ValueError):
        mb.GridConfig(size=8, num_agents=0)
    with pytest.raises(ValueError):
        mb.GridConfig(size=8, on_target="explode")


def test_lifelong_counters_are_monotone():
    env = make_env(on_target="restart", num_agents=8, max_episode_steps=200)
    env.reset(5)
    script = random_script(200, 8, seed=3)
    last = 0
    for t in range(200):
        _, _, term, trunc, info = env.step(script[t])
        assert info["goals_achieved"] >= last
        last = info["goals_achieved"]
        assert not term
    assert trunc
    assert set(info["collisions"]) == {"obstacle", "vertex", "edge"}


def test_custom_map_registration_and_svg():
    grid = "....\n.#..\n....\n..#.\n"
    mb.register_map("tiny-test", grid)
    assert "tiny-test" in mb.map_names()
    assert mb.get_map("tiny-test").strip().splitlines()[-4:] == grid.strip().splitlines()
    env = mb.Env(mb.GridConfig(map_name="tiny-test", num_agents=2, seed=3))
    env.reset()
    assert env.config.width == 4
    svg = env.render_svg()
    assert svg.startswith("<?xml") and svg.count('class="agent"') == 2
    assert 'class="ego"' in env.render_svg(ego_agent=0)
    console = env.render_console().splitlines()
    assert len(console) == 4 and console[1][1] == "#"
    direct = mb.Env(mb.GridConfig(map=grid, num_agents=2, seed=3))
    direct.reset()
    np.testing.assert_array_equal(direct.positions, env.positions)


def test_run_config_and_report():
    config = """
environment:
  dataset: random
  map_name: {grid_search: [random-000, random-001]}
  num_agents: {grid_search: [2, 4]}
  max_episode_steps: 32
algorithms:
  astar: {name: a_star}
  prio: {name: prioritized}
"""
    records, manifest = mb.run_config(config, workers=2)
    assert len(records) == 8 and manifest["record_count"] == 8
    assert {r["algorithm_alias"] for r in records} == {"astar", "prio"}
    report = mb.compute_report(records)
    assert report["algorithms"]["prio"]["coordination"]["mean"] == 1.0
    with pytest.raises(mb.ParseError):
        mb.run_config("environment: [unclosed")


def test_bench_reports_rates():
    r = mb.bench(size=16, agents=8, duration=0.1)
    assert r["steps"] > 0
    assert r["ops"] == pytest.approx(8 * r["sps"])
