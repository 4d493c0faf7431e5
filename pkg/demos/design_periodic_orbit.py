"""Design a multi-revolution periodic orbit from (a, rho).

The reference ellipse a = 10 with closest approach rho = 5 is tuned so that
one libration spans 18 epicycles, then corrected to an exact periodic orbit
of the Hill problem.

    python3 demos/design_periodic_orbit.py
"""

from dataclasses import replace

from hilldro.design import (DesignParams, design_to_cartesian, differential_correct,
                            mean_initial_conditions, section_crossing, tune_resonance_history)
from hilldro.lindstedt import periods


def main():
    params = DesignParams(a=10.0, rho=5.0)
    _, model = mean_initial_conditions(params)
    print(f"untuned ratio T_L/T_O = {periods(model).r:.5f}")

    tuned, history = tune_resonance_history(params, 18.0)
    per = periods(mean_initial_conditions(tuned)[1])
    print(f"tuned a = {tuned.a:.6f} after {len(history)} secant steps, T_L = {per.T_L:.4f}")

    # start on the y = 0 section so that y can be pinned
    seed = section_crossing(design_to_cartesian(replace(tuned, phi0=0.0)))
    orbit = differential_correct(seed, per.T_L, pin=("y",), fix="energy", tol=1e-11)
    u = orbit.initial_state
    print(f"converged in {orbit.iterations} iterations, period {orbit.period:.10f}")
    print(f"x = {u.x:.10f}  X = {u.X:.10f}  Y = {u.Y:.10f}")
    print("monodromy |lambda| =", ", ".join(f"{abs(z):.8f}" for z in orbit.monodromy_eigenvalues))


if __name__ == "__main__":
    main()
