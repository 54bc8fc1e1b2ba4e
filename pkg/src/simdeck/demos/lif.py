"""Leaky integrate-and-fire neuron demos.

Euler step of tau v' = -v + I with threshold/reset spiking:

    v(t) = v(t - dt) + (I(t) - v(t - dt)) / tau * dt
    spike if v >= theta, then reset v := 0

I(t) = I0 + r(t) with r ~ N(0, sigma^2).  One demo sweeps the voltage trace
on a Scope buffer, the other replots a rolling window with the figure
renderer every ``disp_skip`` steps.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..engine import Simulation
from ..render import CONNECT_GRAY, TRACE_GRAY, Figure, Scope
from .registry import register


@dataclass(frozen=True)
class LifState:
    v: float = 0.0
    t: float = 0.0
    tau: float = 10.0
    I0: float = 1.0
    sigma: float = 0.0
    theta: float = 1.0
    v_spike: float = 2.0
    dt: float = 0.1


def lif_step(state: LifState, noise_sample: float = 0.0) -> tuple[LifState, float]:
    """One Euler step; returns the advanced state and the spike output
    (0 or v_spike).  The voltage resets to 0 when it crosses theta."""
    current = state.I0 + noise_sample
    v = state.v + (current - state.v) / state.tau * state.dt
    spike = 0.0
    if v >= state.theta:
        spike = state.v_spike
        v = 0.0
    return replace(state, v=v, t=state.t + state.dt), spike


@register("lif_scope")
class LifScopeDemo(Simulation):
    name = "sim_LIFNeuron"
    directives = """
#@IVISIT:SIMULATION & sim_LIFNeuron
#@IVISIT:SLIDER & I0 & [200,1] & [0,5,6,0.05] & I0 & -1 & float & 1
#@IVISIT:SLIDER & sigma & [200,1] & [0,2,5,0.05] & sigma & -1 & float & 0.3
#@IVISIT:SLIDER & theta & [200,1] & [0.1,2,4,0.05] & theta & -1 & float & 1
#@IVISIT:SLIDER & dt [msec] & [200,1] & [0.01,1,4,0.01] & dt & -1 & float & 0.1
#@IVISIT:SLIDER & Delay [msec] & [200,1] & [0,500,3,10] & delay & -1 & int & 0
#@IVISIT:IMAGE & dendritic voltage v & 2.0 & [0,255] & im_voltage & int
#@IVISIT:TEXT_OUT & Info & [40,3] & just_left & str_info
"""

    tau = 10.0
    v_spike = 2.0
    t_window = 100.0
    v_range = (0.0, 2.0)
    scope_size = (400, 200)

    class Params:
        I0 = 1.0
        sigma = 0.3
        theta = 1.0
        dt = 0.1
        delay = 0

    class Data:
        im_voltage = np.zeros((1, 1))
        str_info = ""

    def init(self):
        self.state = LifState(tau=self.tau, v_spike=self.v_spike,
                              I0=self.par.I0, sigma=self.par.sigma,
                              theta=self.par.theta, dt=self.par.dt)
        self.scope = Scope(self.scope_size[0], self.scope_size[1],
                           (0.0, self.t_window), self.v_range)
        self.data.im_voltage = self.scope.buffer
        self.rng = np.random.default_rng(self.seed)
        self.n_spikes = 0
        self.data.str_info = "t=0.00  v=0.0000  spikes=0"

    def step(self):
        p = self.par
        self.state = replace(self.state, I0=p.I0, sigma=p.sigma, theta=p.theta, dt=p.dt)
        noise = self.rng.normal(0.0, p.sigma) if p.sigma > 0 else 0.0
        v_old = self.state.v
        self.state, spike = lif_step(self.state, noise)
        t, v = self.state.t, self.state.v
        self.scope.set_data(t, v, v_old, CONNECT_GRAY)
        self.scope.set_data(t, v, v, TRACE_GRAY)
        if spike:
            self.n_spikes += 1
            self.scope.set_data(t, spike, 0.0, TRACE_GRAY)
        rate = self.n_spikes / t * 1000.0 if t > 0 else 0.0
        self.data.str_info = (f"t={t:.2f}  v={v:.4f}  spikes={self.n_spikes}  "
                              f"rate={rate:.1f}/s")


@register("lif_plot")
class LifPlotDemo(Simulation):
    name = "sim_LIFNeuron_plot"
    directives = """
#@IVISIT:SIMULATION & sim_LIFNeuron_plot
#@IVISIT:DICTSLIDER & Neuron Parameters & [200,20,-1,1,10] & dict_neuron & 0
#@IVISIT:DICTSLIDERITEM & I0 & [0,5,6,0.05] & I0 & float & 1
#@IVISIT:DICTSLIDERITEM & sigma & [0,2,5,0.05] & sigma & float & 0.3
#@IVISIT:DICTSLIDERITEM & theta & [0.1,2,4,0.05] & theta & float & 1
#@IVISIT:DICTSLIDER & Simulation Parameters & [200,20,-1,1,10] & dict_sim & 0
#@IVISIT:DICTSLIDERITEM & dt & [0.01,1,4,0.01] & dt & float & 0.1
#@IVISIT:DICTSLIDERITEM & disp_skip & [1,50,4,1] & disp_skip & int & 5
#@IVISIT:IMAGE & voltage trace & 1.0 & [0,255] & im_plot & int
#@IVISIT:TEXT_OUT & Info & [40,3] & just_left & str_info
"""

    tau = 10.0
    v_spike = 2.0
    window = 100.0

    class Params:
        dict_neuron = {"I0": 1.0, "sigma": 0.3, "theta": 1.0}
        dict_sim = {"dt": 0.1, "disp_skip": 5}

    class Data:
        im_plot = np.zeros((1, 1))
        str_info = ""

    def init(self):
        self.state = LifState(tau=self.tau, v_spike=self.v_spike)
        self.rng = np.random.default_rng(self.seed)
        self.ts: list[float] = []
        self.vs: list[float] = []
        self.spike_ts: list[float] = []
        self.n = 0
        self.n_spikes = 0
        self._replot()
        self.data.str_info = "t=0.00  spikes=0"

    def step(self):
        np_ = self.par.dict_neuron
        sp = self.par.dict_sim
        self.state = replace(self.state, I0=float(np_["I0"]), sigma=float(np_["sigma"]),
                             theta=float(np_["theta"]), dt=float(sp["dt"]))
        noise = self.rng.normal(0.0, self.state.sigma) if self.state.sigma > 0 else 0.0
        self.state, spike = lif_step(self.state, noise)
        self.ts.append(self.state.t)
        self.vs.append(self.state.v)
        if spike:
            self.n_spikes += 1
            self.spike_ts.append(self.state.t)
        self.n += 1
        # expensive replot only every disp_skip steps
        skip = max(1, int(sp["disp_skip"]))
        if self.n % skip == 0:
            self._trim()
            self._replot()
        self.data.str_info = f"t={self.state.t:.2f}  spikes={self.n_spikes}"

    def _trim(self):
        t_lo = self.state.t - self.window
        while self.ts and self.ts[0] < t_lo:
            self.ts.pop(0)
            self.vs.pop(0)
        while self.spike_ts and self.spike_ts[0] < t_lo:
            self.spike_ts.pop(0)

    def _replot(self):
        t = self.state.t if hasattr(self, "state") else 0.0
        x_hi = max(self.window, t)
        fig = Figure(480, 240, (x_hi - self.window, x_hi), (0.0, self.v_spike))
        fig.xlabel = "t [ms]"
        fig.ylabel = "v"
        if self.ts:
            fig.plot_line(self.ts, self.vs, "blue")
        if self.spike_ts:
            fig.plot_scatter(self.spike_ts, [self.state.theta] * len(self.spike_ts),
                             "+", "red")
        self.fig = fig
        self.data.im_plot = fig.render()
