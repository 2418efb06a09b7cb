from .matrix_game import *
from .steps import *
from .base import *
from .learners import *
from .regret import *
