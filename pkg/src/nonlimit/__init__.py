"""Fixed-step ("non-limit") calculus and exact closed-form grid solutions.

Modules:
  calculus    forward-quotient derivative, grid signals, calculus rules
  oracle      residual and recurrence checks independent of any closed form
  oscillator  free oscillator general solution and its small-step limit
  heat        heat-equation lattice solution, limit family, Fourier bridge
  vanderpol   van der Pol 2-cycle, step roots and Cauchy candidates
  cli         command-line front end
"""

__version__ = "0.1.0"
