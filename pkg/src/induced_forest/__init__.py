"""Induced Forest Bounds - lower bounds on induced forests in regular graphs of large girth."""

__version__ = "0.1.0"
__author__ = "OpenAEC Foundation"
