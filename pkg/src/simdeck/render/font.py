"""Built-in 5x7 bitmap font for tick and axis labels.

Determinism is the goal, not beauty: every renderer output must be
byte-for-byte reproducible without system font dependencies.  Lowercase
letters fall back to their uppercase glyphs; unknown characters render as a
hollow box.
"""

from __future__ import annotations

import numpy as np

GLYPH_W = 5
GLYPH_H = 7
ADVANCE = 6  # one blank column between glyphs

_RAWS = {
    " ": ".....|.....|.....|.....|.....|.....|.....",
    "0": ".###.|#...#|#..##|#.#.#|##..#|#...#|.###.",
    "1": "..#..|.##..|..#..|..#..|..#..|..#..|.###.",
    "2": ".###.|#...#|....#|...#.|..#..|.#...|#####",
    "3": ".###.|#...#|....#|..##.|....#|#...#|.###.",
    "4": "...#.|..##.|.#.#.|#..#.|#####|...#.|...#.",
    "5": "#####|#....|####.|....#|....#|#...#|.###.",
    "6": "..##.|.#...|#....|####.|#...#|#...#|.###.",
    "7": "#####|....#|...#.|..#..|..#..|..#..|..#..",
    "8": ".###.|#...#|#...#|.###.|#...#|#...#|.###.",
    "9": ".###.|#...#|#...#|.####|....#|...#.|.##..",
    "A": ".###.|#...#|#...#|#####|#...#|#...#|#...#",
    "B": "####.|#...#|#...#|####.|#...#|#...#|####.",
    "C": ".###.|#...#|#....|#....|#....|#...#|.###.",
    "D": "####.|#...#|#...#|#...#|#...#|#...#|####.",
    "E": "#####|#....|#....|####.|#....|#....|#####",
    "F": "#####|#....|#....|####.|#....|#....|#....",
    "G": ".###.|#...#|#....|#.###|#...#|#...#|.###.",
    "H": "#...#|#...#|#...#|#####|#...#|#...#|#...#",
    "I": ".###.|..#..|..#..|..#..|..#..|..#..|.###.",
    "J": "..###|...#.|...#.|...#.|...#.|#..#.|.##..",
    "K": "#...#|#..#.|#.#..|##...|#.#..|#..#.|#...#",
    "L": "#....|#....|#....|#....|#....|#....|#####",
    "M": "#...#|##.##|#.#.#|#.#.#|#...#|#...#|#...#",
    "N": "#...#|##..#|#.#.#|#..##|#...#|#...#|#...#",
    "O": ".###.|#...#|#...#|#...#|#...#|#...#|.###.",
    "P": "####.|#...#|#...#|####.|#....|#....|#....",
    "Q": ".###.|#...#|#...#|#...#|#.#.#|#..#.|.##.#",
    "R": "####.|#...#|#...#|####.|#.#..|#..#.|#...#",
    "S": ".####|#....|#....|.###.|....#|....#|####.",
    "T": "#####|..#..|..#..|..#..|..#..|..#..|..#..",
    "U": "#...#|#...#|#...#|#...#|#...#|#...#|.###.",
    "V": "#...#|#...#|#...#|#...#|.#.#.|.#.#.|..#..",
    "W": "#...#|#...#|#...#|#.#.#|#.#.#|##.##|#...#",
    "X": "#...#|#...#|.#.#.|..#..|.#.#.|#...#|#...#",
    "Y": "#...#|#...#|.#.#.|..#..|..#..|..#..|..#..",
    "Z": "#####|....#|...#.|..#..|.#...|#....|#####",
    "-": ".....|.....|.....|.###.|.....|.....|.....",
    "+": ".....|..#..|..#..|#####|..#..|..#..|.....",
    ".": ".....|.....|.....|.....|.....|.##..|.##..",
    ",": ".....|.....|.....|.....|..#..|..#..|.#...",
    ":": ".....|.##..|.##..|.....|.##..|.##..|.....",
    ";": ".....|.##..|.##..|.....|..#..|..#..|.#...",
    "=": ".....|.....|#####|.....|#####|.....|.....",
    "[": ".###.|.#...|.#...|.#...|.#...|.#...|.###.",
    "]": ".###.|...#.|...#.|...#.|...#.|...#.|.###.",
    "(": "...#.|..#..|.#...|.#...|.#...|..#..|...#.",
    ")": ".#...|..#..|...#.|...#.|...#.|..#..|.#...",
    "/": ".....|....#|...#.|..#..|.#...|#....|.....",
    "\\": ".....|#....|.#...|..#..|...#.|....#|.....",
    "%": "##..#|##..#|...#.|..#..|.#...|#..##|#..##",
    "_": ".....|.....|.....|.....|.....|.....|#####",
    "<": "...#.|..#..|.#...|#....|.#...|..#..|...#.",
    ">": ".#...|..#..|...#.|....#|...#.|..#..|.#...",
    "*": ".....|..#..|#.#.#|.###.|#.#.#|..#..|.....",
    "!": "..#..|..#..|..#..|..#..|..#..|.....|..#..",
    "?": ".###.|#...#|....#|...#.|..#..|.....|..#..",
    "#": ".#.#.|.#.#.|#####|.#.#.|#####|.#.#.|.#.#.",
    "'": "..#..|..#..|.....|.....|.....|.....|.....",
    "|": "..#..|..#..|..#..|..#..|..#..|..#..|..#..",
}

_UNKNOWN = "#####|#...#|#...#|#...#|#...#|#...#|#####"


def _rows(raw: str) -> tuple[int, ...]:
    rows = raw.split("|")
    assert len(rows) == GLYPH_H and all(len(r) == GLYPH_W for r in rows)
    return tuple(int(r.replace(".", "0").replace("#", "1"), 2) for r in rows)


GLYPHS: dict[str, tuple[int, ...]] = {ch: _rows(raw) for ch, raw in _RAWS.items()}
_UNKNOWN_ROWS = _rows(_UNKNOWN)


def glyph_for(ch: str) -> tuple[int, ...]:
    g = GLYPHS.get(ch)
    if g is None:
        g = GLYPHS.get(ch.upper(), _UNKNOWN_ROWS)
    return g


def text_width(s: str) -> int:
    return max(0, len(s) * ADVANCE - 1)


def draw_text(buf: np.ndarray, x: int, y: int, s: str, color) -> None:
    """Stamp ``s`` with top-left corner at (x, y); pixels outside the buffer
    are silently dropped."""
    h, w = buf.shape[:2]
    for i, ch in enumerate(s):
        gx = x + i * ADVANCE
        for ry, rowbits in enumerate(glyph_for(ch)):
            py = y + ry
            if py < 0 or py >= h:
                continue
            for rx in range(GLYPH_W):
                if rowbits & (1 << (GLYPH_W - 1 - rx)):
                    px = gx + rx
                    if 0 <= px < w:
                        buf[py, px] = color
