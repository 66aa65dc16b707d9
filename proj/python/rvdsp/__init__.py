"""Cycle-stepped RV32IM + DSP accelerator simulator."""

import json

from . import _core
from ._core import (
    ConfigError,
    ScenarioError,
    cnn_layer_macs,
    decode,
    disassemble,
    dot_speedup,
    dsp_conv_busy_cycles,
    dsp_conv_cycles,
    dsp_dot_cycles,
    encode,
    energy_per_tap,
    latency_seconds,
    listing_line,
    speedup,
    sw_conv_cycles,
    sw_dot_cycles,
)


def run_scenario(text, base_dir="."):
    """Run a scenario given as text and return the report as a dict."""
    return json.loads(_core.run_scenario(text, base_dir))


def table3(k=16, frequency_hz=100e6, seed=7):
    """Model and simulation figures for N=1024 at the given K."""
    return json.loads(_core.table3(k, frequency_hz, seed))


__all__ = [name for name in dir() if not name.startswith("_") and name != "json"]
