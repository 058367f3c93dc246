import os

BASE_DIR = os.path.dirname(os.path.abspath(__file__))

OUTPUT_FOLDER = os.path.join(BASE_DIR, 'reports')
LOG_FILE = 'app.log'
ALLOWED_EXTENSIONS = {'csv'}

# Область и квадратуры
L_TRUNC = 1e6
TAIL_TOL = 1e-2
QUAD_TOL = 1e-9
QUAD_ORDER = 10
QUAD_MAX_PANELS = 4000

# Сетки и существенные супремумы
GRID_N = 2048
INNER_GRID_N = 512
GRID_MODE = 'logarithmic'
GRID_SPAN = 1e-8
ESUP_TOL = 1e-6
ESUP_MAX_ITER = 60
INNER_REFINE_DEPTH = 8

# Покрывающие последовательности
COVERING_A = 109.0
MONO_TOL = 1e-7
COVER_TOL = 1e-7

# Оракул и перебор
ORACLE_PIECES = 64
ORACLE_RESTARTS = 48
ORACLE_SWEEPS = 400
BRUTE_RESTARTS = 32
MESH_PANELS_PER_DECADE = 4
MESH_DECADES = 14
MESH_ORDER = 8

# Проверки
K_CHECK = 1e3
Q_GUARD = 1e-6
ALTERNATE_FACTOR = 1e2

SEED = 20240501
JOBS = 1
