"""Interactive 2-D data generation demo using raw pointer bindings.

Click actions on the plot add, delete or move data points: a small IDLE /
MOVING state machine over press/move/release, with the pixel -> data
transform done by the handler itself.
"""

from __future__ import annotations

import numpy as np

from ..automaton import bind_raw
from ..engine import Simulation
from ..render import Figure, data_from_pixel
from .classify import nearest_neighbor
from .registry import register


@register("datagen")
class DataGenDemo(Simulation):
    name = "sim_DataGeneration"
    directives = """
#@IVISIT:SIMULATION & sim_DataGeneration
#@IVISIT:LISTSEL & Action & [10,3] & [New,Delete,Move] & str_action & -1 & string & New
#@IVISIT:IMAGE & Input Data & 1.0 & [0,255] & im_data & int
#@IVISIT:TEXT_OUT & Info & [30,2] & just_left & str_info
"""

    x_range = (-2.0, 2.0)
    y_range = (-2.0, 2.0)

    class Params:
        str_action = "New"

    class Data:
        im_data = np.zeros((1, 1))
        str_info = ""

    def init(self):
        self.X = np.zeros((0, 2))
        self.moving = -1  # index being dragged, -1 = idle
        self.fig = self._figure()
        self._render()

    def bind(self, engine):
        bind_raw(engine, "Input Data",
                 on_press=self.on_press, on_move=self.on_move, on_release=self.on_release)

    def _figure(self) -> Figure:
        return Figure(420, 300, self.x_range, self.y_range)

    def _to_data(self, pos):
        return np.array(data_from_pixel(pos[0], pos[1], self.fig.axis))

    def on_press(self, evt):
        p = self._to_data(evt.pos)
        action = self.par.str_action
        if action == "New":
            self.X = np.vstack([self.X, p])
        elif action == "Delete" and len(self.X):
            self.X = np.delete(self.X, nearest_neighbor(self.X, p), axis=0)
        elif action == "Move" and len(self.X):
            self.moving = nearest_neighbor(self.X, p)
            self.X[self.moving] = p

    def on_move(self, evt):
        if self.moving >= 0:
            self.X[self.moving] = self._to_data(evt.pos)

    def on_release(self, evt):
        self.moving = -1

    def step(self):
        self._render()
        self.data.str_info = f"{len(self.X)} points  action={self.par.str_action}"

    def _render(self):
        fig = self._figure()
        if len(self.X):
            fig.plot_scatter(self.X[:, 0], self.X[:, 1], "o", "blue")
        self.fig = fig
        self.data.im_data = fig.render()
