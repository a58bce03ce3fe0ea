from .output import FORMATS, RunConfig, format_number, jsonable, render, write_output
