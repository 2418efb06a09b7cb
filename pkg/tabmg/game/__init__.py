from .markov_game import *
from .dynamics import *
from .examples import *
