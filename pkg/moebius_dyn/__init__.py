"""moebius-dyn - Dynamics of Moebius maps f(x) = (x + a)/(bx + c) over R and Q_p."""

__version__ = "0.1.0"
