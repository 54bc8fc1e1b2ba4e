"""Interactive two-class classification demo.

Data points are created, moved and deleted through the click/drag automaton;
each step refits the selected classifier (least squares or kernel MLP),
evaluates the discriminant on a grid, and draws the data with the y=0
decision boundary (plus the +-2 level sets) into the plot widget.
"""

from __future__ import annotations

import numpy as np

from ..automaton import DRAG_INIT, AutomatonConfig, bind_automaton
from ..engine import Simulation
from ..render import Figure, contour_zero
from .classify import (
    count_errors,
    fit_kernel_mlp,
    fit_least_squares,
    nearest_neighbor,
)
from .registry import register

GRID_N = 101


@register("classifiers")
class ClassifiersDemo(Simulation):
    name = "sim_Classifiers"
    directives = """
#@IVISIT:SIMULATION & sim_Classifiers
#@IVISIT:LISTSEL & Action & [10,4] & [Test,New,Delete,Move] & str_action & -1 & string & New
#@IVISIT:RADIOBUTTON & New Data Label & [+1,-1] & str_label & +1
#@IVISIT:DICTSLIDER & New Data Parameters & [200,20,-1,1,10] & dict_newdata & 0
#@IVISIT:DICTSLIDERITEM & N & [1,20,4,1] & N & int & 5
#@IVISIT:DICTSLIDERITEM & sig1 & [0.01,1,4,0.01] & sig1 & float & 0.15
#@IVISIT:DICTSLIDERITEM & sig2 & [0.01,1,4,0.01] & sig2 & float & 0.15
#@IVISIT:LISTSEL & Classifier & [16,2] & [least_squares,kernel_mlp] & str_classifier & -1 & string & kernel_mlp
#@IVISIT:LISTSEL & Kernel & [10,3] & [linear,tanh,gauss] & str_kernel & -1 & string & tanh
#@IVISIT:SLIDER & log_lmbda & [200,1] & [-6,3,4,0.1] & log_lmbda & -1 & float & -2
#@IVISIT:SLIDER & kernel sigma & [200,1] & [0.1,10,4,0.1] & kernel_sigma & -1 & float & 2
#@IVISIT:CHECKBOX & Options & [contours,errors] & str_options & 11
#@IVISIT:IMAGE & Input Data & 1.0 & [0,255] & im_data & int
#@IVISIT:TEXT_OUT & Results & [44,8] & just_left & str_results
"""

    x_range = (-2.0, 2.0)
    y_range = (-2.0, 2.0)

    class Params:
        str_action = "New"
        str_label = "+1"
        dict_newdata = {"N": 5, "sig1": 0.15, "sig2": 0.15}
        str_classifier = "kernel_mlp"
        str_kernel = "tanh"
        log_lmbda = -2.0
        kernel_sigma = 2.0
        str_options = "11"

    class Data:
        im_data = np.zeros((1, 1))
        str_results = ""

    def init(self):
        self.rng = np.random.default_rng(self.seed)
        # two seed clusters so the plot is not empty on startup
        a = self.rng.normal((-0.8, -0.5), 0.25, size=(8, 2))
        b = self.rng.normal((0.8, 0.6), 0.25, size=(8, 2))
        self.X = np.vstack([a, b])
        self.T = np.array([1.0] * 8 + [-1.0] * 8)
        self.x_test = None
        self.y_test = None
        self.fig = self._figure()
        self._refit_and_render()

    def bind(self, engine):
        config = AutomatonConfig(
            action_param="str_action",
            action_types={"Test": "click", "New": "click", "Delete": "click",
                          "Move": "drag"},
            button_no=1,
            coordinate_mode="data",
        )
        bind_automaton(engine, "Input Data", "im_data", "fig", config, "handle_action")

    def handle_action(self, action, pos, pos_init, pos_prev):
        """Single action handler for all pointer gestures; ``action`` is the
        automaton phase (click / drag_init / drag_move / drag_finish)."""
        p = np.asarray(pos)
        mode = self.par.str_action
        if mode == "Test":
            self.x_test = p
        elif mode == "New":
            cfg = self.par.dict_newdata
            n = max(1, int(cfg["N"]))
            cov = np.diag([float(cfg["sig1"]) ** 2, float(cfg["sig2"]) ** 2])
            fresh = self.rng.multivariate_normal(p, cov, size=n)
            label = 1.0 if self.par.str_label == "+1" else -1.0
            self.X = np.vstack([self.X, fresh])
            self.T = np.concatenate([self.T, [label] * n])
        elif mode == "Delete":
            if len(self.X):
                k = nearest_neighbor(self.X, p)
                self.X = np.delete(self.X, k, axis=0)
                self.T = np.delete(self.T, k)
        elif mode == "Move":
            if action == DRAG_INIT and len(self.X):
                self._drag_idx = nearest_neighbor(self.X, p)
            if len(self.X) and getattr(self, "_drag_idx", -1) >= 0:
                self.X[self._drag_idx] = p

    def step(self):
        self._refit_and_render()

    # -- fitting and drawing ------------------------------------------------

    def _figure(self) -> Figure:
        return Figure(460, 360, self.x_range, self.y_range)

    def _refit_and_render(self):
        lam = 10.0 ** float(self.par.log_lmbda)
        model = None
        n_err = 0
        if len(self.X) >= 1:
            if self.par.str_classifier == "least_squares":
                model = fit_least_squares(self.X, self.T, lam)
            else:
                model = fit_kernel_mlp(self.X, self.T, self.par.str_kernel,
                                       float(self.par.kernel_sigma), lam)
            n_err = count_errors(model, self.X, self.T)
        self.y_test = None
        if model is not None and self.x_test is not None:
            self.y_test = float(model.discriminant(self.x_test.reshape(1, -1))[0])

        fig = self._figure()
        if model is not None:
            self._draw_boundary(fig, model)
        pos = self.T > 0
        if pos.any():
            fig.plot_scatter(self.X[pos, 0], self.X[pos, 1], "x", "red")
        if (~pos).any():
            fig.plot_scatter(self.X[~pos, 0], self.X[~pos, 1], "o", "blue")
        if self.x_test is not None:
            fig.plot_scatter([self.x_test[0]], [self.x_test[1]], "s", "green")
        self.fig = fig
        self.data.im_data = fig.render()
        self._report(lam, n_err)

    def _draw_boundary(self, fig: Figure, model):
        xs = np.linspace(*self.x_range, GRID_N)
        ys = np.linspace(*self.y_range, GRID_N)
        gx, gy = np.meshgrid(xs, ys)
        pts = np.column_stack([gx.ravel(), gy.ravel()])
        grid = model.discriminant(pts).reshape(GRID_N, GRID_N)
        levels = [(0.0, "cyan")]
        if self.par.str_options[:1] == "1":
            levels += [(2.0, "yellow"), (-2.0, "violet")]
        for level, color in levels:
            for line in contour_zero(grid - level, fig.axis):
                fig.plot_line(line[:, 0], line[:, 1], color)
            fig.text(self.x_range[0] + 0.08, self.y_range[1] - 0.22 - 0.22 * levels.index((level, color)),
                     f"y={level:.3f}", color)

    def _report(self, lam, n_err):
        lines = [
            f"N={len(self.X)}  lambda={lam:.4g}",
            f"classifier={self.par.str_classifier}  kernel={self.par.str_kernel}"
            f"  sigma={self.par.kernel_sigma:g}",
        ]
        if self.par.str_options[1:2] == "1":
            lines.append(f"training errors: {n_err}")
        if self.y_test is not None:
            cls = "+1" if self.y_test >= 0 else "-1"
            lines.append(f"test point y={self.y_test:.4f}  class {cls}")
        self.data.str_results = "\n".join(lines)
