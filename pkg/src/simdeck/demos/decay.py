"""Hello-world demo: x(0) = 100, x(n) = decay * x(n-1)."""

from __future__ import annotations

from ..engine import Simulation
from .registry import register


def decay_step(x: float, decay: float) -> float:
    return decay * x


@register("decay")
class DecayDemo(Simulation):
    name = "sim_HelloWorld1"
    directives = """
#@IVISIT:SIMULATION & sim_HelloWorld1
#@IVISIT:SLIDER & Decay Factor & [200,1] & [0,1,3,0.01] & decay & -1 & float & 0.9
#@IVISIT:SLIDER & Delay [msec] & [200,1] & [0,1000,3,10] & delay & -1 & int & 0
#@IVISIT:TEXT_OUT & Results & [40,3] & just_left & str_results
"""

    class Params:
        decay = 0.9
        delay = 0

    class Data:
        str_results = ""

    def __init__(self, seed: int | None = 0):
        super().__init__(seed)
        self.x = 100.0
        self.n = 0

    def init(self):
        self.x = 100.0
        self.n = 0
        self.data.str_results = f"n=0  x={self.x:.12g}"

    def step(self):
        self.x = decay_step(self.x, self.par.decay)
        self.n += 1
        self.data.str_results = f"n={self.n}  x={self.x:.12g}"
