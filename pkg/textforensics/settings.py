"""
Django settings for the textforensics project.

The project has no database and no HTTP surface: Django provides the settings layer,
logging configuration and the management-command runner (`python manage.py <subcommand>`).

For more information on this file, see
https://docs.djangoproject.com/en/6.0/topics/settings/
"""

import os
import sys

from pathlib import Path


# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

ROOT_DIR = BASE_DIR.parent

if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))


# Only used by Django internals; nothing here is signed or served.
SECRET_KEY = os.getenv("TEXTFORENSICS_SECRET_KEY", "textforensics-offline-toolkit")

DEBUG = False

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    "rest_framework",
    # toolkit apps
    "apps.core",
    "apps.imaging",
    "apps.dataset",
    "apps.jitter",
    "apps.evaluation",
    "apps.daf",
]

# No persistence layer: manifests, predictions and recipes are JSON Lines files.
DATABASES = {}

USE_TZ = True

TIME_ZONE = "UTC"


# Runtime knobs. Only these two may be overridden from the environment.
TOOLKIT_THREADS = int(os.getenv("TEXTFORENSICS_THREADS", "1"))
TOOLKIT_LOG_LEVEL = os.getenv("TEXTFORENSICS_LOG_LEVEL", "INFO").upper()


LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{asctime} {levelname} {name} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "apps": {
            "handlers": ["console"],
            "level": TOOLKIT_LOG_LEVEL,
            "propagate": False,
        },
    },
}


# Imaging
# Dotted path of the reverse-compression callable `(image, strength) -> image`.
IMAGING_DEBLOCKER = "apps.imaging.ops.block_boundary_deblock"


# Texture Jitter defaults (scale s = sqrt(text_w * text_h)).
JITTER = {
    "selection_prob": 0.5,
    "min_text_side": 8,
    "global_seed": 0,
    "max_attempts": 5,
    "mad_min": 1.0,
    "mad_max": 24.0,
    "size_buckets": [
        {
            "max_scale": 32.0,
            "params": {
                "blur_sigma_range": [0.4, 0.8],
                "jpeg_quality_range": [75, 90],
                "sharpen_strength_range": [0.2, 0.5],
                "downsample_factor_range": [1.25, 1.6],
                "motion_length_range": [2, 3],
                "deblock_strength_range": [0.5, 1.0],
                "feather_width": 1,
            },
        },
        {
            "max_scale": 96.0,
            "params": {
                "blur_sigma_range": [0.8, 1.6],
                "jpeg_quality_range": [55, 80],
                "sharpen_strength_range": [0.3, 0.7],
                "downsample_factor_range": [1.5, 2.0],
                "motion_length_range": [3, 5],
                "deblock_strength_range": [0.5, 1.0],
                "feather_width": 2,
            },
        },
        {
            "max_scale": None,
            "params": {
                "blur_sigma_range": [1.2, 2.4],
                "jpeg_quality_range": [35, 65],
                "sharpen_strength_range": [0.5, 1.0],
                "downsample_factor_range": [1.8, 2.6],
                "motion_length_range": [4, 7],
                "deblock_strength_range": [0.5, 1.0],
                "feather_width": 3,
            },
        },
    ],
}


# Evaluation defaults
EVALUATION = {
    "iou_threshold": 0.5,
    "score_threshold": 0.5,
}


# DAF numerical core defaults
DAF = {
    "margin": 32.0,
    "grad_check": {"dim": 8, "n": 16, "epsilon": 1e-6, "tolerance": 1e-5},
    "toy": {
        "dim": 32,
        "n": 2000,
        "n_test": 1000,
        "separation": 10.0,
        "margin": 4.0,
        "steps": 2000,
        "learning_rate": 0.05,
    },
}
