"""File formats for signals, images, and result records.

Signals travel as CSV with one value per line.  Images travel as PGM
(P2 or P5, maxval 255 or 65535) and are mapped linearly to [0, 1] on
load.  JSON is always written in a canonical form (sorted keys, two
space indent, trailing newline) so that re-emitting a parsed document
reproduces the original bytes.
"""

import json

import numpy as np

from .errors import ParameterError


def read_csv(path):
    """Load a 1-d signal, one real value per line; blank lines ignored."""
    values = []
    with open(path, "r", encoding="ascii") as handle:
        for lineno, line in enumerate(handle, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                values.append(float(text))
            except ValueError:
                raise ParameterError(
                    f"{path}:{lineno}: not a number: {text!r}") from None
    if not values:
        raise ParameterError(f"{path}: no values")
    return np.array(values, dtype=np.float64)


def write_csv(path, values):
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1:
        raise ParameterError("CSV output is for 1-d signals")
    with open(path, "w", encoding="ascii") as handle:
        for v in values:
            handle.write(f"{v:.17g}\n")


def _pgm_header_tokens(data):
    # tokens separated by whitespace, with '#' comments running to EOL
    tokens, pos = [], 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos >= len(data):
            raise ParameterError("truncated PGM header")
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    return tokens, pos + 1


def read_pgm(path):
    """Load a grayscale PGM image scaled to [0, 1]."""
    with open(path, "rb") as handle:
        data = handle.read()
    tokens, body_start = _pgm_header_tokens(data)
    magic = tokens[0]
    if magic not in (b"P2", b"P5"):
        raise ParameterError(f"{path}: not a PGM file")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise ParameterError(f"{path}: bad PGM header") from None
    if width < 1 or height < 1 or not 0 < maxval < 65536:
        raise ParameterError(f"{path}: bad PGM dimensions")
    count = width * height
    if magic == b"P2":
        fields = data[body_start - 1:].split()
        if len(fields) != count:
            raise ParameterError(f"{path}: expected {count} pixels")
        pixels = np.array([int(f) for f in fields], dtype=np.float64)
    else:
        # P5 payload: big-endian 16-bit when maxval needs two bytes
        wide = maxval > 255
        need = count * (2 if wide else 1)
        body = data[body_start:body_start + need]
        if len(body) != need:
            raise ParameterError(f"{path}: truncated PGM payload")
        dtype = ">u2" if wide else np.uint8
        pixels = np.frombuffer(body, dtype=dtype).astype(np.float64)
    if np.any(pixels > maxval):
        raise ParameterError(f"{path}: pixel exceeds maxval")
    return (pixels / maxval).reshape(height, width)


def write_pgm(path, image):
    """Write an image with values in [0, 1] as binary PGM, maxval 255."""
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 2:
        raise ParameterError("PGM output is for 2-d images")
    scaled = np.clip(np.rint(image * 255.0), 0, 255).astype(np.uint8)
    header = f"P5\n{image.shape[1]} {image.shape[0]}\n255\n"
    with open(path, "wb") as handle:
        handle.write(header.encode("ascii"))
        handle.write(scaled.tobytes())


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_json(path, obj):
    with open(path, "w", encoding="ascii") as handle:
        handle.write(canonical_json(obj))


def read_json(path):
    with open(path, "r", encoding="ascii") as handle:
        return json.load(handle)
