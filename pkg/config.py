"""Конфигурация решателя"""
import os

# Уровень логирования (можно переопределить переменной окружения)
LOG_LEVEL = os.getenv("GFD_LOG_LEVEL", "INFO")

# Типы узлов облака
NODE_INNER = "I"
NODE_BOUNDARY = "B"

NODE_KINDS = [NODE_INNER, NODE_BOUNDARY]

# Облако точек
DEFAULT_DOMAIN = (0.0, 1.0, 0.0, 1.0)  # x_min, x_max, y_min, y_max
DEFAULT_GRID = (21, 21)
MIN_GRID_SIZE = 3
MAX_PERTURBATION = 0.5
NORMAL_TOLERANCE = 1e-12
PAIRING_ANGLE_TOLERANCE = 1e-9
PAIRING_CANDIDATES = 8
COORDINATE_FORMAT = ".17g"  # 17 значащих цифр

CLOUD_HEADER = ["index", "x", "y", "kind", "nx", "ny", "pair"]

# Звезды и шаблоны GFD
DEFAULT_STAR_SIZE = 8
MIN_STAR_SIZE = 5
STAR_SEARCH_MARGIN = 8  # запас кандидатов из KD-дерева сверх s
DEFAULT_WEIGHT_EXPONENT = 2.0  # w_i = 1 / (h_i^2 + k_i^2)
CONDITION_THRESHOLD = 1e12

STENCIL_DUMP_HEADER = ["center", "neighbor", "lam1", "lam2", "lam3", "lam4", "lam5"]

# Обработка условия Неймана
NEUMANN_PAIRED = "paired"  # V_b = V_paired, первый порядок
NEUMANN_STENCIL = "stencil"  # n . grad V = 0 по звезде граничного узла

NEUMANN_MODES = [NEUMANN_PAIRED, NEUMANN_STENCIL]
DEFAULT_NEUMANN = NEUMANN_PAIRED

# Эллиптический решатель
RESIDUAL_TOLERANCE = 1e-10

# Функции подвижности
GAMMA_EXP = "exp"
GAMMA_RATIONAL = "rational"

GAMMA_NAMES = [GAMMA_EXP, GAMMA_RATIONAL]

HYPOTHESIS_S_MAX = 50.0
HYPOTHESIS_SAMPLES = 100_000
MIN_HYPOTHESIS_SAMPLES = 100

# Шаг по времени
DEFAULT_DT = 0.001
DEFAULT_T_FINAL = 5.0
REPORT_TIMES = [0.05, 0.1, 0.5, 1.0, 5.0]
DIVERGENCE_THRESHOLD = 1e100

# Оценка устойчивости шага
LAPLACIAN_FACTOR_LITERAL = "literal"  # -lambda_00, как напечатано
LAPLACIAN_FACTOR_GAMMA = "gamma"  # -gamma(V_0) * lambda_00

LAPLACIAN_FACTORS = [LAPLACIAN_FACTOR_LITERAL, LAPLACIAN_FACTOR_GAMMA]
DEFAULT_STABILITY_EVERY = 0  # 0 = только при t = 0

STABILITY_CSV_HEADER = ["node", "bound", "a1_prime", "a1_doubleprime", "b1"]

# Сравнение регулярного и нерегулярного облаков
COMPARE_TOLERANCE = 0.2
COMPARE_NORM_FLOOR = 1e-12  # ниже этой нормы относительное расхождение не считается
DEFAULT_PERTURBATION = 0.2

# Файлы результатов
NORMS_FILE = "norms.csv"
REPORT_FILE = "report.txt"
STABILITY_FILE = "stability.txt"
STABILITY_CSV_FILE = "stability_nodes.csv"
SNAPSHOT_PATTERN = "snapshot_t{time}.csv"

NORMS_HEADER = ["t", "norm_u", "norm_v"]
SNAPSHOT_HEADER = ["x", "y", "u", "v"]

# Пресеты
PRESET_EXAMPLE1 = "example1"
PRESET_EXAMPLE2 = "example2"

PRESETS = [PRESET_EXAMPLE1, PRESET_EXAMPLE2]

# Коды выхода
EXIT_OK = 0
EXIT_FAILURE = 1  # нарушение устойчивости / критерия приемки
EXIT_CONFIG_ERROR = 2  # ошибка формулы или конфигурации
EXIT_IO_ERROR = 3
