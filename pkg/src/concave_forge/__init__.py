"""Concave symplectic fillings of open books given as Dehn-twist words."""

from .homology import HomologyClass, Surface, make_surface
from .twistword import TwistLetter, TwistWord, word_action
from .rewrite import RewriteResult, rewrite_to_boundary_form
from .cobordism import build_concave_filling, emit_kirby_script, euler_characteristic

__all__ = [
    "HomologyClass",
    "Surface",
    "make_surface",
    "TwistLetter",
    "TwistWord",
    "word_action",
    "RewriteResult",
    "rewrite_to_boundary_form",
    "build_concave_filling",
    "emit_kirby_script",
    "euler_characteristic",
]
