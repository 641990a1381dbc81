#!/usr/bin/env python3
# Copyright 2026 The HGCache Authors.
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the golden plan files from the schedule rules, without the library."""

import sys
from pathlib import Path

ROLES = ["ctrl_encoder", "ctrl_mid", "gen_encoder", "gen_mid", "gen_decoder"]


def column(t, computes):
    out, last = [], None
    for i in range(1, t + 1):
        if i in computes:
            out.append(("compute", ""))
            last = i
        else:
            out.append(("reuse", str(last)))
    return out


def uniform(t, n):
    gen = column(t, set(range(1, t + 1, n)))
    ctrl = [("compute", "")] * t
    return [ctrl, ctrl, gen, gen, gen]


def hgc(t, tau_c, n, intra_tenths, inter_tenths):
    half = max(t // 2, 1)
    n_intra = max(1, (n * intra_tenths + 5) // 10)
    n_inter = max(1, (n * inter_tenths + 5) // 10)
    latter = set(range(half, t + 1, n_inter))
    enc = column(t, set(range(1, half, n)) | latter)
    middec = column(t, set(range(1, half, n_intra)) | latter)
    ctrl = []
    for i in range(1, t + 1):
        if i <= tau_c:
            ctrl.append(("compute", ""))
        elif i <= half:
            ctrl.append(("reuse", str(tau_c)))
        else:
            ctrl.append(("skip", ""))
    return [ctrl, ctrl, enc, middec, middec]


def render(cols):
    lines = ["step,role,decision,source"]
    for i in range(len(cols[0])):
        for r, name in enumerate(ROLES):
            kind, src = cols[r][i]
            lines.append(f"{i + 1},{name},{kind},{src}")
    return "\n".join(lines) + "\n"


def main():
    here = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent
    (here / "uniform_t20_n5.csv").write_text(render(uniform(20, 5)))
    (here / "hgc_default.csv").write_text(render(hgc(20, 6, 5, 4, 6)))


if __name__ == "__main__":
    main()
