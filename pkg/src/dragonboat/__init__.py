"""Dragon-boat racing simulator: deterministic paddle-driven boat dynamics,
three input techniques, an exertion-device wire protocol, race logic, and
the physiological/statistical evaluation pipeline."""

__version__ = "0.1.0"
