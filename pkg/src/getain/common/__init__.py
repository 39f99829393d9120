"""公共模块"""
