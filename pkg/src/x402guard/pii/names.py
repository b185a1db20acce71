"""Bundled name lexicons for the contextual person recogniser."""

FIRST_NAMES = frozenset(
    """
    Aaron Abigail Adam Adrian Ahmed Aisha Alan Albert Alejandro Alex Alexander
    Alexandra Alice Alicia Amanda Amber Amelia Amy Ana Andrea Andrew Angela Anna
    Anne Anthony Antonio Arjun Ashley Barbara Ben Benjamin Beth Betty Brandon
    Brenda Brian Bruce Carl Carlos Carol Caroline Catherine Charles Charlotte
    Chen Chloe Chris Christian Christina Christine Christopher Claire Daniel
    Danielle David Deborah Dennis Diana Diego Dmitri Donald Donna Dorothy Douglas
    Dylan Edward Elena Elizabeth Ella Emily Emma Eric Erik Ethan Eva Evelyn Fatima
    Frank Gabriel Gary George Grace Gregory Hannah Harold Harry Hassan Heather
    Helen Henry Hiroshi Hugo Ian Ingrid Isabella Ivan Jack Jacob James Jamie Jane
    Janet Jason Javier Jean Jennifer Jeremy Jessica Joan Joe John Jonathan Jorge
    Jose Joseph Joshua Joyce Juan Julia Julie Justin Karen Katherine Kathleen
    Kelly Kenneth Kevin Kim Kyle Lars Laura Lauren Lawrence Leo Li Liam Linda Lisa
    Lucas Lucy Luis Madison Magnus Manuel Margaret Maria Marie Mark Martha Mary
    Matthew Mei Megan Melissa Michael Michelle Miguel Mohammed Nancy Natalie
    Nathan Nicholas Nicole Noah Nora Olga Olivia Omar Oscar Pablo Pamela Patricia
    Patrick Paul Pedro Peter Priya Rachel Rahul Raj Ralph Raymond Rebecca Richard
    Robert Roger Ronald Rosa Ruth Ryan Samantha Samuel Sandra Sara Sarah Scott
    Sean Sebastian Sharon Sofia Sophia Stephanie Stephen Steven Susan Sven Thomas
    Timothy Tyler Victoria Vincent Virginia Walter Wei William Yuki Zachary Zoe
    """.split()
)

SURNAMES = frozenset(
    """
    Adams Ali Allen Anderson Andersson Baker Bauer Brown Campbell Carter Chen
    Clark Collins Cook Davis Diaz Edwards Eriksson Evans Fischer Flores Garcia
    Gonzalez Green Hall Harris Hernandez Hill Ito Jackson Johansson Johnson Jones
    Khan Kim King Kumar Larsen Lee Lewis Li Lopez Martin Martinez Meyer Miller
    Mitchell Moore Morgan Muller Murphy Nelson Nguyen Nielsen Novak Olsen Park
    Patel Perez Petrov Phillips Ramirez Roberts Robinson Rodriguez Rossi Sanchez
    Schmidt Schneider Scott Sharma Silva Singh Smith Stewart Tanaka Taylor Thomas
    Thompson Turner Wagner Walker Wang Weber White Williams Wilson Wright Wu Yamamoto
    Young Zhang
    """.split()
)

FIRST_NAMES_LOWER = frozenset(n.lower() for n in FIRST_NAMES)
SURNAMES_LOWER = frozenset(n.lower() for n in SURNAMES)
