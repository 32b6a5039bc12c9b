"""Portrait of the two conversion channels through the dense medium.

Runs the plateau-probe preset in both mixing modes and plots the scaled photon
number change of pump, probe and generated fields against depth, plus the
time profiles of the weak fields at each snapshot.  In difference mixing the
probe and generated photon changes track each other; in sum mixing the probe
drains into the generated field.
"""

import argparse
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from scrapfwm.propagation import propagate
from scrapfwm.scenarios import entrance_fields, preset


def run(name):
    p = preset(name)
    record = propagate(entrance_fields(p), p.stark_field, p.medium, p.z_end,
                       delta=p.drive.delta, snapshot_depths=p.snapshot_depths)
    return p, record


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="figures")
    args = ap.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)

    for name, label in (("fig17a", "difference"), ("fig17b", "sum")):
        p, record = run(name)
        zs = record.xi_samples

        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
        for field in ("pump", "probe", "generated"):
            ax1.plot(zs, [record.metrics_at(i).eps_ph[field]
                          for i in range(len(zs))], label=field)
        ax1.set_xlabel("Z")
        ax1.set_ylabel("scaled photon change")
        ax1.set_title(f"{label} mixing")
        ax1.legend()

        times = record.entry.grid
        for snap in record.snapshots:
            ax2.plot(times, np.abs(snap.fields.g2) ** 2,
                     label=f"Z={snap.z:.0g}")
        ax2.set_xlabel("T")
        ax2.set_ylabel("|probe|^2")
        ax2.legend(fontsize=7)

        path = os.path.join(args.out_dir, f"conversion_{label}.png")
        fig.savefig(path, dpi=200, bbox_inches="tight")
        final = record.final_metrics()
        print(f"{name} ({label}): probe {final.eps_ph['probe']:+.4f}, "
              f"generated {final.eps_ph['generated']:+.4f}, "
              f"pump ratio {record.g1_energy_ratio[-1]:.4f} -> {path}")


if __name__ == "__main__":
    main()
