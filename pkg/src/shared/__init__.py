"""Shared utilities: logging, settings and errors"""
