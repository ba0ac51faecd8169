"""Write SVG figures for the bundled inputs into figures/.

For planar inputs: the set N on the circle and the amoeba.  For 3D inputs:
hemisphere and projective-disk views of N.  The times-two input gets a plot
of its homoclinic window instead.
"""
import os

from expsub.expansivity import AnalysisConfig, analyze
from expsub.formats import read_input
from expsub.homoclinic import eins_ward_fundamental, principal_homoclinic
from expsub.render import render_cloud, render_sset, render_window

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
OUT = os.path.join(ROOT, "figures")


def write(name, svg):
    with open(os.path.join(OUT, name), "w") as fh:
        fh.write(svg)
    print("wrote", name)


def main():
    os.makedirs(OUT, exist_ok=True)
    for name in ("ledrappier", "line3", "ledrappier3d", "eins_ward"):
        spec = read_input(os.path.join(ROOT, "inputs", name + ".txt"))
        cfg = AnalysisConfig(angular_res_deg=1.0, param_map=spec.param_map)
        rep = analyze(spec.target(), cfg)
        write(f"{name}_N.svg", render_sset(rep.n, title=f"N ({name})"))
        if rep.cloud is not None and len(rep.cloud):
            write(f"{name}_amoeba.svg", render_cloud(rep.cloud.X, title=f"amoeba ({name})"))
    spec = read_input(os.path.join(ROOT, "inputs", "line3.txt"))
    w = principal_homoclinic(spec.gens[0], 12)
    write("line3_homoclinic.svg", render_window(w.values, title="homoclinic point, 3 + u + v"))
    ew = eins_ward_fundamental(8)
    write("eins_ward_slice.svg", render_window(ew.values[:, :, 8 - 3], title="level k = -3"))


if __name__ == "__main__":
    main()
