"""Backend selection for the hot abstract-evaluation kernels.

The compiled extension (``svmcert._core._speed``, Cython + directed
rounding via the C floating-point environment) is used when it is
importable; otherwise the numpy implementation in
``svmcert._core.pure`` serves every call.  Set ``SVMCERT_BACKEND`` to
``pure`` or ``compiled`` to force a choice (forcing ``compiled`` raises
if the extension is missing).  Both backends satisfy the same soundness
contract; enclosures may differ by rounding-slack-sized amounts.
"""

from __future__ import annotations

import os

from . import pure

_choice = os.environ.get("SVMCERT_BACKEND", "auto").lower()

if _choice == "pure":
    impl = pure
elif _choice in ("auto", "compiled"):
    try:
        from . import _speed as impl  # type: ignore[no-redef]
    except ImportError:
        if _choice == "compiled":
            raise ImportError(
                "SVMCERT_BACKEND=compiled but svmcert._core._speed is not built; "
                "run: python setup.py build_ext --inplace")
        impl = pure
else:
    raise ValueError(f"unknown SVMCERT_BACKEND value {_choice!r}")

BACKEND_NAME = impl.BACKEND_NAME


def get_backend(name: str | None = None):
    """The active backend module, or a specific one by name."""
    if name in (None, BACKEND_NAME):
        return impl
    if name == "pure":
        return pure
    if name == "compiled":
        from . import _speed  # noqa: F811
        return _speed
    raise ValueError(f"unknown backend {name!r}")
