"""Gateway configuration: layering, parsing, and the loopback guard."""

import json

import pytest

from counselkit.fusion import FusionConfig
from counselkit.gateway import GatewayConfig, load_config


def test_defaults_are_loopback_and_store_relative():
    config = GatewayConfig()
    assert config.host == "127.0.0.1"
    assert config.port == 8715
    assert config.store_root == "./sessions"
    assert config.allow_non_loopback is False
    assert config.fusion == FusionConfig()


def test_file_layer_applies(tmp_path):
    path = tmp_path / "gateway.json"
    path.write_text(json.dumps({"port": 9100, "store_root": "/tmp/s"}))
    config = load_config(path=path)
    assert config.port == 9100
    assert config.store_root == "/tmp/s"
    assert config.host == "127.0.0.1"


def test_env_overrides_file(tmp_path):
    path = tmp_path / "gateway.json"
    path.write_text(json.dumps({"port": 9100, "host": "localhost"}))
    config = load_config(
        path=path, env={"COUNSELKIT_PORT": "9200", "COUNSELKIT_IGNORED": "x"}
    )
    assert config.port == 9200
    assert config.host == "localhost"


def test_overrides_beat_env_and_file(tmp_path):
    path = tmp_path / "gateway.json"
    path.write_text(json.dumps({"port": 9100}))
    config = load_config(
        path=path,
        env={"COUNSELKIT_PORT": "9200"},
        overrides={"port": 9300},
    )
    assert config.port == 9300


def test_none_overrides_are_skipped():
    config = load_config(overrides={"port": None, "host": None})
    assert config.port == 8715
    assert config.host == "127.0.0.1"


def test_bool_env_parsing():
    for raw, expected in (
        ("1", True), ("true", True), ("YES", True), ("on", True),
        ("0", False), ("false", False), ("", False),
    ):
        config = load_config(env={"COUNSELKIT_ALLOW_NON_LOOPBACK": raw})
        assert config.allow_non_loopback is expected, raw


def test_fusion_section_builds_fusion_config(tmp_path):
    path = tmp_path / "gateway.json"
    path.write_text(json.dumps({"fusion": {"interval_ms": 30_000, "theta": 0.5}}))
    config = load_config(path=path)
    assert config.fusion.interval_ms == 30_000
    assert config.fusion.theta == 0.5
    assert config.fusion.lambda_ == 0.5


def test_unknown_file_key_rejected(tmp_path):
    path = tmp_path / "gateway.json"
    path.write_text(json.dumps({"prot": 9100}))
    with pytest.raises(ValueError):
        load_config(path=path)


def test_non_loopback_host_refused_without_flag():
    config = GatewayConfig(host="0.0.0.0")
    with pytest.raises(ValueError):
        config.require_bindable()
    GatewayConfig(host="0.0.0.0", allow_non_loopback=True).require_bindable()
    for host in ("127.0.0.1", "localhost", "::1"):
        GatewayConfig(host=host).require_bindable()
