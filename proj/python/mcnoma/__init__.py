# SPDX-License-Identifier: Apache-2.0
#
# mcnoma - resource allocation and scheduling for downlink multicarrier NOMA
# Copyright (C) 2026 The mcnoma authors

from ._core import *  # noqa: F401,F403
from ._core import oracle  # noqa: F401
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
