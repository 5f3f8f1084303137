"""
Application-wide constants.

Centralizes magic strings and numbers shared by more than one app.
"""

MANIFEST_SCHEMA = "textforensics.manifest"
MANIFEST_VERSION = 1

# Percent scale used for every reported score.
PERCENT = 100.0

# 8-bit sample range.
PIXEL_MIN = 0
PIXEL_MAX = 255

JPEG_BLOCK_SIZE = 8

SEED_BITS = 64
