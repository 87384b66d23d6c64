"""
Decayed adaptive per-coordinate gradient ascent used by the ADVI loop.
"""

import numpy as np


class DecayedAdaGrad:
    """Adaptive per-coordinate steps with an exponentially decayed squared-gradient accumulator.

    a <- decay_rate * g**2 + (1 - decay_rate) * a
    x <- x + step_size * g / (epsilon + sqrt(a))        (ascent)
    """

    def __init__(self, step_size: float = 0.1, decay_rate: float = 0.1, epsilon: float = 1e-8):
        self.step_size = step_size
        self.decay_rate = decay_rate
        self.epsilon = epsilon
        self.accumulator = None
        self.iteration = 0

    def reset(self):
        self.accumulator = None
        self.iteration = 0

    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        if self.accumulator is None:
            self.accumulator = np.zeros_like(grad)
        self.accumulator = self.decay_rate * grad * grad + (1.0 - self.decay_rate) * self.accumulator
        self.iteration += 1
        return params + self.step_size * grad / (self.epsilon + np.sqrt(self.accumulator))
