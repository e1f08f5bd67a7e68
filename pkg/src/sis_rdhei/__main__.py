#!/usr/bin/env python
#
# SPDX-License-Identifier: MIT


"""Main entrypoint to sis-rdhei."""


from .cli import app


if __name__ == "__main__":
    app(prog_name="sis-rdhei")
