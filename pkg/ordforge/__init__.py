'''Relativized ordinal notation systems, dilators and their property checks.'''

__version__ = '0.1.1'
