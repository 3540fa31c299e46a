from setuptools import setup


SHORT_DESCRIPTION = 'Relativized ordinal notation systems, dilators and their property checks'

try:
    with open('README.md', encoding='utf8') as readme:
        LONG_DESCRIPTION = readme.read()

except FileNotFoundError:
    LONG_DESCRIPTION = SHORT_DESCRIPTION


setup(
    name='ordforge',
    description=SHORT_DESCRIPTION,
    long_description=LONG_DESCRIPTION,
    long_description_content_type='text/markdown',
    version='0.1.1',
    packages=['ordforge'],
    package_data={'ordforge': ['grammars/*.lark']},
    license='MIT',
    platforms='any',
    python_requires='>=3.7',
    install_requires=[
        'PyYAML',
        'lark>=1.1',
    ],
    extras_require={
        'test': ['hypothesis>=6.0'],
    },
    entry_points={
        'console_scripts': ['ordforge=ordforge.cli:main'],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Utilities",
    ]
)
