from setuptools import setup

setup(name='ffcorr',
      version='0.1.0',
      packages=['ffcorr', 'tests'],
      description='Correlations of factorization functions over F_q[T].',
      long_description=open('README.rst').read(),
      install_requires=['numpy>=1.20', 'sympy'],
      python_requires='>=3.8',
      entry_points={'console_scripts': ['ffcorr = ffcorr.cli:main']},
      test_suite='tests',
      classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: Software Development :: Libraries :: Python Modules'
        ])
